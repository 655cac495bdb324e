#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace purcellsim::cli {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view bytes);
// Reads the whole file; throws ValidationError if it cannot be opened.
std::string read_file(const std::string& path);

// Records what a run consumed and produced. The inputs digest covers the
// command, options and input contents only, so it is stable across runs;
// the timestamp is informational.
class RunManifest {
public:
    RunManifest(std::string command, std::string out_dir);

    void add_input(const std::string& name, std::string_view bytes);
    void add_option(const std::string& key, const std::string& value);
    // Writes out_dir/name and lists it with its hash.
    void emit(const std::string& name, const std::string& content);

    std::string inputs_digest() const;
    const std::vector<std::string>& files() const { return files_; }
    // Writes out_dir/manifest.json.
    void write() const;

private:
    std::string command_;
    std::string out_dir_;
    std::vector<std::pair<std::string, std::string>> inputs_;   // name, sha256
    std::vector<std::pair<std::string, std::string>> options_;
    std::vector<std::string> files_;
    std::vector<std::string> file_hashes_;
    std::vector<std::size_t> file_sizes_;
};

}  // namespace purcellsim::cli
