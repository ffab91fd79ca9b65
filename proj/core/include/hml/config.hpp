#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hml/grid.hpp"

namespace hml {

// Round-trip decimal: %.17g.
std::string format_double(double x);
// "re+imi" with both parts in format_double.
std::string format_complex(Complex z);
// Accepts 1, -2.5, i, -i, 3i, 1+0i, 2-0.5i, 1e-3+2e-1i.
Complex parse_complex(const std::string& text);
std::vector<Complex> parse_complex_list(const std::string& text);

// Flat key-value configuration. Text form: one "key = value" per line, sorted,
// '#' starts a comment.
class RunConfig {
public:
    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);
    void set_int(const std::string& key, long value);
    void set_complex(const std::string& key, Complex value);

    bool has(const std::string& key) const;
    void erase(const std::string& key);
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    Complex get_complex(const std::string& key) const;

    // Entries of other replace ours.
    void merge(const RunConfig& other);

    std::string to_text() const;
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // SHA-256 of to_text().
    std::string digest() const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    bool operator==(const RunConfig& other) const { return entries_ == other.entries_; }

private:
    std::map<std::string, std::string> entries_;
};

// Digest of kind, parameters, grid, tolerance and tool version.
std::string cache_key(const std::string& kind, const std::vector<double>& parameters, double R, int n, double eps,
                      double tol);

}  // namespace hml
