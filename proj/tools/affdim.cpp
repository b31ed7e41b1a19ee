#include "affdim/commands.hpp"
#include "affdim/error.hpp"
#include "affdim/fixtures.hpp"
#include "affdim/ifs.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifndef AFFDIM_FIXTURE_DIR
#define AFFDIM_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace affdim;

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write '" + path.string() + "'");
    }
    out << text;
}

// The report goes to OUT/NAME when --out is set, else to stdout.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(cfg.out);
    write_file(std::filesystem::path(cfg.out) / name, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimension estimates for planar self-affine sets"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    cfg.fixtures_dir = AFFDIM_FIXTURE_DIR;
    app.add_option("--input", cfg.input, "IFS or carpet JSON file");
    app.add_option("--depth", cfg.depth, "word depth or sampling depth");
    app.add_option("--budget", cfg.budget, "word budget (at most the global cap)");
    app.add_option("--tol", cfg.tol, "root tolerance for the affinity dimension");
    app.add_option("--seed", cfg.seed, "seed for stochastic commands");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--fixtures", cfg.fixtures_dir, "fixture directory for verify");

    auto* check = app.add_subcommand("check", "domination, irreducibility and separation verdicts");
    auto* dims = app.add_subcommand("dims", "dimension estimates");
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", cfg.suite, "diml|dima|ahl|gibbs|content|trans")->required();
    verify->add_option("--fixture", cfg.fixture, "built-in fixture name (default per suite)");
    auto* render = app.add_subcommand("render", "SVG of the attractor");
    render->add_flag("--directions", cfg.directions, "overlay Furstenberg directions and the multicone");
    std::string csv_path;
    render->add_option("--csv", csv_path, "also write the point cloud as CSV");
    auto* carpet = app.add_subcommand("carpet", "carpet closed forms");
    carpet->add_option("--eps", cfg.eps, "size of the extra map");
    auto* fixture_cmd = app.add_subcommand("fixture", "print a built-in fixture as JSON");
    std::string fixture_name;
    fixture_cmd->add_option("name", fixture_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (const char* cap = std::getenv("AFFDIM_WORD_CAP")) {
        try {
            set_word_cap(static_cast<std::size_t>(std::stoull(cap)));
        } catch (const std::exception&) {
            std::cerr << "error: AFFDIM_WORD_CAP must be a positive integer\n";
            return kInputError;
        }
    }

    try {
        if (*fixture_cmd) {
            std::cout << to_json(fixture(fixture_name)).dump(2) << "\n";
            return kOk;
        }
        CommandResult result;
        std::string name;
        if (*check) {
            result = cmd_check(cfg);
            name = "check.json";
        } else if (*dims) {
            result = cmd_dims(cfg);
            name = "dims.json";
        } else if (*verify) {
            result = cmd_verify(cfg);
            name = "verify_" + cfg.suite + ".json";
        } else if (*render) {
            result = cmd_render(cfg);
            emit(cfg, "render.svg", result.svg);
            if (!cfg.out.empty()) {
                emit(cfg, "render.json", result.report.dump(2) + "\n");
            }
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                write_csv(result.cloud, out);
            }
            return result.exit_code;
        } else if (*carpet) {
            result = cmd_carpet(cfg);
            name = "carpet.json";
        }
        emit(cfg, name, result.report.dump(2) + "\n");
        return result.exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
