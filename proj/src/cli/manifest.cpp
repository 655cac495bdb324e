#include "purcellsim/cli/manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "purcellsim/cli/emit.hpp"
#include "purcellsim/errors.hpp"

namespace purcellsim::cli {

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunManifest::RunManifest(std::string command, std::string out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    std::filesystem::create_directories(out_dir_);
}

void RunManifest::add_input(const std::string& name, std::string_view bytes) {
    inputs_.emplace_back(name, sha256_hex(bytes));
}

void RunManifest::add_option(const std::string& key, const std::string& value) {
    options_.emplace_back(key, value);
}

void RunManifest::emit(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::path(out_dir_) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw ValidationError("failed writing " + path.string());
    files_.push_back(name);
    file_hashes_.push_back(sha256_hex(content));
    file_sizes_.push_back(content.size());
}

std::string RunManifest::inputs_digest() const {
    std::ostringstream ss;
    ss << "purcellsim " << kToolVersion << '\n' << "command " << command_ << '\n';
    for (const auto& [k, v] : options_) ss << "option " << k << '=' << v << '\n';
    for (const auto& [name, hash] : inputs_) ss << "input " << name << ' ' << hash << '\n';
    return sha256_hex(ss.str());
}

void RunManifest::write() const {
    Json j;
    j["tool"] = "purcellsim";
    j["version"] = kToolVersion;
    j["command"] = command_;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["timestamp"] = stamp;
    j["inputs_digest"] = inputs_digest();
    Json opts = Json::object();
    for (const auto& [k, v] : options_) opts[k] = v;
    j["options"] = std::move(opts);
    Json inputs = Json::array();
    for (const auto& [name, hash] : inputs_) inputs.push_back({{"name", name}, {"sha256", hash}});
    j["inputs"] = std::move(inputs);
    Json files = Json::array();
    for (std::size_t i = 0; i < files_.size(); ++i) {
        files.push_back({{"path", files_[i]}, {"sha256", file_hashes_[i]}, {"bytes", file_sizes_[i]}});
    }
    j["files"] = std::move(files);
    const auto path = std::filesystem::path(out_dir_) / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << dump(j);
}

}  // namespace purcellsim::cli
