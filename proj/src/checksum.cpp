#include "affdim/checksum.hpp"

#include "affdim/error.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace affdim {

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 initialisation failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) {
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
        }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 15];
    }
    return out;
}

ChecksumState check_manifest(const std::string& path) {
    const std::filesystem::path file(path);
    std::ifstream manifest(file.parent_path() / "SHA256SUMS");
    if (!manifest) {
        return ChecksumState::Unlisted;
    }
    const std::string name = file.filename().string();
    std::string line;
    while (std::getline(manifest, line)) {
        std::istringstream row(line);
        std::string sum;
        std::string listed;
        row >> sum >> listed;
        if (!listed.empty() && listed.front() == '*') {
            listed.erase(0, 1);
        }
        if (listed == name) {
            return sum == sha256_file(path) ? ChecksumState::Ok : ChecksumState::Mismatch;
        }
    }
    return ChecksumState::Unlisted;
}

} // namespace affdim
