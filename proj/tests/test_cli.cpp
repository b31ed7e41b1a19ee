#include "affdim/checksum.hpp"
#include "affdim/commands.hpp"
#include "affdim/fixtures.hpp"
#include "affdim/io.hpp"
#include "affdim/projective.hpp"
#include "affdim/svg.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace affdim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("affdim_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& file, const std::string& text) const {
        std::ofstream(path / file, std::ios::binary) << text;
        return (path / file).string();
    }
};

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("IFS JSON round trip") {
    for (const auto& name : fixture_names()) {
        const Ifs a = fixture(name);
        const Ifs b = ifs_from_json(Json::parse(to_json(a).dump()));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].linear.a == b[i].linear.a);
            CHECK(a[i].linear.b == b[i].linear.b);
            CHECK(a[i].linear.c == b[i].linear.c);
            CHECK(a[i].linear.d == b[i].linear.d);
            CHECK(a[i].translation.x == b[i].translation.x);
            CHECK(a[i].translation.y == b[i].translation.y);
        }
        CHECK(a.ball().radius == b.ball().radius);
    }
}

TEST_CASE("carpet JSON round trip") {
    const CarpetSpec spec = example_carpet();
    const Json j = to_json(spec);
    CHECK(is_carpet_json(j));
    CHECK_FALSE(is_carpet_json(to_json(fixture("cone"))));
    const CarpetSpec back = carpet_from_json(j);
    CHECK(back.p == 4);
    CHECK(back.q == 5);
    CHECK(back.digits == spec.digits);
    CHECK_THROWS_AS(carpet_from_json(Json::parse(R"({"p": 3, "q": 2, "digits": [[0, 0]]})")), InvalidInput);
    CHECK_THROWS_AS(carpet_from_json(Json::parse(R"({"p": 2, "q": 3, "digits": [[0]]})")), InvalidInput);
}

TEST_CASE("malformed IFS input") {
    CHECK_THROWS_AS(ifs_from_json(Json::parse(R"({})")), InvalidInput);
    CHECK_THROWS_AS(ifs_from_json(Json::parse(R"({"maps": []})")), InvalidInput);
    CHECK_THROWS_AS(ifs_from_json(Json::parse(R"({"maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "tx": 0}]})")),
                    InvalidInput);
    CHECK_THROWS_AS(
        ifs_from_json(Json::parse(R"({"maps": [{"a": "x", "b": 0, "c": 0, "d": 0.5, "tx": 0, "ty": 0}]})")),
        InvalidInput);
    CHECK_THROWS_AS(
        ifs_from_json(Json::parse(R"({"maps": [{"a": 1.5, "b": 0, "c": 0, "d": 0.5, "tx": 0, "ty": 0}]})")),
        InvalidInput);
    CHECK_THROWS_AS(ifs_from_json(Json::parse(R"({"maps": [{"a": 0.5, "b": 0.5, "c": 0.5, "d": 0.5, "tx": 0, "ty": 0}]})")),
                    InvalidInput);
    CHECK_THROWS_AS(
        ifs_from_json(Json::parse(
            R"({"maps": [{"a": 0.5, "b": 0, "c": 0, "d": 0.5, "tx": 0, "ty": 0}], "ball": {"cx": 5, "cy": 5, "r": 0.1}})")),
        InvalidInput);

    TempDir dir("io");
    CHECK_THROWS_AS(load_json((dir.path / "missing.json").string()), InvalidInput);
    CHECK_THROWS_AS(load_json(dir.write("bad.json", "{\"maps\": [")), InvalidInput);
}

TEST_CASE("point cloud writers") {
    const auto cloud = PointCloud::from_points({{0.1, 0.2}, {-1.0, 3.5}}, 0.01);
    std::ostringstream csv;
    write_csv(cloud, csv);
    CHECK(csv.str() == "x,y\n0.10000000000000001,0.20000000000000001\n-1,3.5\n");
    std::ostringstream bin;
    write_binary(cloud, bin);
    const std::string bytes = bin.str();
    REQUIRE(bytes.size() == 32);
    double first = 0.0;
    std::memcpy(&first, bytes.data(), 8);
    CHECK(first == 0.1);
}

TEST_CASE("checksums") {
    TempDir dir("sums");
    const std::string file = dir.write("abc.json", "abc");
    CHECK(sha256_file(file) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(check_manifest(file) == ChecksumState::Unlisted);
    dir.write("SHA256SUMS", "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  abc.json\n");
    CHECK(check_manifest(file) == ChecksumState::Ok);
    dir.write("abc.json", "abd");
    CHECK(check_manifest(file) == ChecksumState::Mismatch);
    CHECK_THROWS_AS(sha256_file((dir.path / "nope").string()), InvalidInput);
}

TEST_CASE("shipped fixtures match their manifest") {
    const fs::path dir = fs::path(AFFDIM_SOURCE_DIR) / "fixtures";
    for (const auto& name : fixture_names()) {
        const std::string path = (dir / (name + ".json")).string();
        CHECK_MESSAGE(check_manifest(path) == ChecksumState::Ok, name);
        const Ifs shipped = ifs_from_json(load_json(path));
        CHECK(to_json(shipped).dump() == to_json(fixture(name)).dump());
    }
}

TEST_CASE("SVG elements") {
    const auto cloud = PointCloud::from_points({{0.0, 0.0}, {1.0, 1.0}, {0.5, 0.25}, {0.5000001, 0.25}}, 0.01);
    const std::string svg = render_svg(cloud);
    // background plus three distinct pixels
    CHECK(count(svg, "<rect") == 4);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "class=\"xf\"") == 0);

    const DirectionOverlay overlay{{ProjInterval{0.2, 0.1}, ProjInterval{1.0, 0.3}}, {ProjInterval{0.1, 0.5}}};
    const std::string with = render_svg(cloud, overlay);
    CHECK(count(with, "class=\"xf\"") == 2);
    CHECK(count(with, "class=\"cone\"") == 1);
    CHECK(render_svg(cloud, overlay) == with);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(InvalidInput("x")) == kInputError);
    CHECK(exit_code_for(BudgetExceeded(10)) == kBudgetFailure);
    CHECK(exit_code_for(NotConverged(5)) == kBudgetFailure);
    CHECK(exit_code_for(NotDominated()) == kConditionFailure);
    CHECK(exit_code_for(NotFound("x")) == kConditionFailure);
}

TEST_CASE("command preconditions") {
    TempDir dir("cmd");
    RunConfig cfg;
    CHECK_THROWS_AS(cmd_check(cfg), InvalidInput);

    cfg.input = dir.write("cone.json", to_json(fixture("cone")).dump());
    CHECK_THROWS_AS(cmd_dims(cfg), InvalidInput); // stochastic without a seed
    CHECK_THROWS_AS(cmd_carpet(cfg), InvalidInput);
    cfg.budget = 0;
    CHECK_THROWS_AS(cmd_check(cfg), InvalidInput);
    cfg.budget.reset();

    const auto ok = cmd_check(cfg);
    CHECK(ok.exit_code == kOk);
    CHECK(ok.report["command"] == "check");

    cfg.input = dir.write("overlap.json", to_json(fixture("overlap")).dump());
    CHECK(cmd_check(cfg).exit_code == kConditionFailure);

    cfg.input = dir.write("carpet.json", to_json(example_carpet()).dump());
    cfg.eps = 0.01;
    const auto c = cmd_carpet(cfg);
    CHECK(c.exit_code == kOk);
    CHECK(c.report["example"]["chain"]["s_eps_lt_mackay"] == true);
}

TEST_CASE("dims under a small budget returns a partial report") {
    TempDir dir("partial");
    RunConfig cfg;
    cfg.input = dir.write("eps.json", to_json(fixture("example_eps")).dump());
    cfg.seed = 1;
    cfg.depth = 12;
    cfg.budget = 1000;
    const std::size_t cap = word_cap();
    const auto r = cmd_dims(cfg);
    CHECK(r.exit_code == kBudgetFailure);
    CHECK(r.report["partial"] == true);
    CHECK(r.report["points"].is_null());
    CHECK(r.report["affinity_dimension"].is_object());
    CHECK_FALSE(r.report["warnings"].empty());
    CHECK(word_cap() == cap);
}

TEST_CASE("verify resolves fixtures and checksums") {
    RunConfig cfg;
    cfg.fixtures_dir = (fs::path(AFFDIM_SOURCE_DIR) / "fixtures").string();
    cfg.suite = "trans";
    CHECK_THROWS_AS(cmd_verify(cfg), InvalidInput);
    cfg.seed = 3;
    const auto r = cmd_verify(cfg);
    CHECK(r.report["result"]["status"] == "pass");
    cfg.suite = "nope";
    CHECK_THROWS_AS(cmd_verify(cfg), InvalidInput);

    TempDir dir("verify");
    fs::copy_file(fs::path(cfg.fixtures_dir) / "cone.json", dir.path / "cone.json");
    dir.write("SHA256SUMS", "0000000000000000000000000000000000000000000000000000000000000000  cone.json\n");
    cfg.fixtures_dir = dir.path.string();
    cfg.suite = "content";
    cfg.fixture = "cone";
    CHECK_THROWS_AS(cmd_verify(cfg), InvalidInput);
}
