#include "hml/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "hml/cache_io.hpp"
#include "hml/error.hpp"

namespace hml {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& s, const std::string& whole) {
    if (s.empty()) throw ConfigError("malformed number '" + whole + "'");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) throw ConfigError("malformed number '" + whole + "'");
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) {
    std::string im = format_double(z.imag());
    if (im.front() != '-') im = "+" + im;
    return format_double(z.real()) + im + "i";
}

Complex parse_complex(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.back() != 'i') return {parse_real(s, text), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
            split = p;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    const std::string im = split == std::string::npos ? body : body.substr(split);
    double vi;
    if (im.empty() || im == "+")
        vi = 1.0;
    else if (im == "-")
        vi = -1.0;
    else
        vi = parse_real(im, text);
    return {re.empty() ? 0.0 : parse_real(re, text), vi};
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    if (k.empty() || k.find_first_of("=#\n") != std::string::npos) throw ConfigError("bad config key '" + key + "'");
    if (value.find('\n') != std::string::npos) throw ConfigError("config value for '" + k + "' spans lines");
    entries_[k] = trim(value);
}

void RunConfig::set_double(const std::string& key, double value) { set(key, format_double(value)); }
void RunConfig::set_int(const std::string& key, long value) { set(key, std::to_string(value)); }
void RunConfig::set_complex(const std::string& key, Complex value) { set(key, format_complex(value)); }

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }
void RunConfig::erase(const std::string& key) { entries_.erase(key); }

const std::string& RunConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        return parse_real(v, v);
    } catch (const ConfigError&) {
        throw ConfigError("config key '" + key + "' is not a number: '" + v + "'");
    }
}

long RunConfig::get_int(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
    return x;
}

bool RunConfig::get_bool(const std::string& key) const {
    if (!has(key)) return false;
    const std::string& v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "' is not a boolean: '" + v + "'");
}

Complex RunConfig::get_complex(const std::string& key) const { return parse_complex(get(key)); }

void RunConfig::merge(const RunConfig& other) {
    for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

std::string RunConfig::to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        c.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse(text);
}

void RunConfig::save(const std::filesystem::path& path) const { write_file_atomic(path, to_text()); }

std::string RunConfig::digest() const { return sha256_hex(to_text()); }

std::string cache_key(const std::string& kind, const std::vector<double>& parameters, double R, int n, double eps,
                      double tol) {
    std::string s = "kind=" + kind + ";params=";
    for (double p : parameters) s += format_double(p) + ",";
    s += ";R=" + format_double(R) + ";n=" + std::to_string(n) + ";eps=" + format_double(eps) +
         ";tol=" + format_double(tol) + ";version=" HML_VERSION;
    return sha256_hex(s);
}

}  // namespace hml
