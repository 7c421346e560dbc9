#pragma once

// Shared helpers for the unit suites: temp directories, small file utilities,
// and frozen reference spectra for the transverse-field Ising chain at the
// sizes the tests exercise. Reference eigenvalues were computed with an
// independent dense eigensolver and are pinned to 12 digits.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsup {

// RAII temporary directory under the system temp root.
class TempDir {
  public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 gen(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("qwl_test_" + std::to_string(gen()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create a temporary test directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

inline std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

// Parses the flat "key = value" manifest format.
inline std::map<std::string, std::string> parse_manifest(const std::string& path) {
    std::map<std::string, std::string> kv;
    for (const auto& line : lines_of(read_file(path))) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

// Splits one CSV line; the exporters never quote fields.
inline std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Frozen spectra for H = J sum sz sz + h sum sx, periodic chain.
inline const std::vector<double>& spectrum_n1_j2_h1() {
    static const std::vector<double> e = {1.0, 3.0};
    return e;
}

inline const std::vector<double>& spectrum_n2_j2_h1() {
    static const std::vector<double> e = {-4.472135955000, -4.0, 4.0, 4.472135955000};
    return e;
}

inline const std::vector<double>& spectrum_n4_j2_h1() {
    static const std::vector<double> e = {
        -8.543116820279, -8.472135955000, -2.648613787448, -2.0, -2.0, -0.472135955000,
        0.0,             0.0,             0.0,              0.0,  0.472135955000,
        2.0,             2.0,             2.648613787448,   8.472135955000, 8.543116820279};
    return e;
}

}  // namespace testsup
