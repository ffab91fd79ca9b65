#include "hml/cache_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "hml/error.hpp"

namespace hml {

namespace {

class Writer {
public:
    explicit Writer(const char magic[4]) { out_.append(magic, 4); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    std::string take() { return std::move(out_); }

private:
    void raw(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
    std::string out_;
};

class Reader {
public:
    Reader(const std::string& bytes, const char magic[4]) : bytes_(bytes) {
        if (bytes_.size() < 4 || std::memcmp(bytes_.data(), magic, 4) != 0)
            throw IoError(std::string("cache file lacks the ") + std::string(magic, 4) + " magic");
        pos_ = 4;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    int count() {
        const double v = f64();
        if (!(v >= 5.0 && v <= 1e5) || v != std::floor(v)) throw IoError("cache file has a corrupt node count");
        return static_cast<int>(v);
    }
    void expect_end() const {
        if (pos_ != bytes_.size()) throw IoError("cache file has trailing bytes");
    }

private:
    void raw(void* p, std::size_t n) {
        if (pos_ + n > bytes_.size()) throw IoError("cache file is truncated");
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw IoError("write failed on " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("read failed on " + path.string());
    return ss.str();
}

std::string encode_scalar_cache(const ScalarSolution& s) {
    const ScalarProblem& p = s.problem;
    Writer w("HML1");
    w.u32(static_cast<std::uint32_t>(p.kind) | (static_cast<std::uint32_t>(p.treatment) << 8));
    w.f64(p.param.real());
    w.f64(p.param.imag());
    w.f64(p.grid->R());
    w.f64(p.grid->n());
    w.f64(p.eps);
    w.f64(p.tolerance);
    for (double v : s.state) w.f64(std::isnan(v) ? kExcisedSentinel : v);
    return w.take();
}

ScalarCache decode_scalar_cache(const std::string& bytes) {
    Reader r(bytes, "HML1");
    ScalarCache c;
    const std::uint32_t tag = r.u32();
    if ((tag & 0xff) > 1 || (tag >> 8) > 1) throw IoError("HML1 cache has an unknown kind tag");
    c.kind = static_cast<ScalarKind>(tag & 0xff);
    c.treatment = static_cast<BoundaryTreatment>(tag >> 8);
    const double re = r.f64();
    c.param = {re, r.f64()};
    c.R = r.f64();
    c.n = r.count();
    c.eps = r.f64();
    c.tol = r.f64();
    c.values.resize(static_cast<std::size_t>(c.n) * c.n);
    for (double& v : c.values) {
        v = r.f64();
        if (v == kExcisedSentinel) v = kNaN;
    }
    r.expect_end();
    return c;
}

void write_scalar_cache(const std::filesystem::path& path, const ScalarSolution& solution) {
    write_file_atomic(path, encode_scalar_cache(solution));
}

ScalarCache read_scalar_cache(const std::filesystem::path& path) { return decode_scalar_cache(read_file(path)); }

ScalarSolution restore_scalar(const ScalarCache& c, int max_iterations) {
    const ScalarProblem p = build_problem(c.kind, c.param, c.R, c.n, c.eps, c.tol, max_iterations, c.treatment);
    return newton_solve_state(p, c.values);
}

std::string encode_matrix_cache(const MatrixSolution& s) {
    const MatrixProblem& p = s.problem;
    Writer w("HML2");
    w.f64(p.gamma.real());
    w.f64(p.gamma.imag());
    w.f64(p.omega.real());
    w.f64(p.omega.imag());
    w.f64(p.grid->R());
    w.f64(p.grid->n());
    w.f64(p.tolerance);
    for (std::size_t k = 0; k < s.h.X.size(); ++k) {
        const Mat2 h = s.h.h(k);
        w.f64(h(0, 0).real());
        w.f64(h(1, 1).real());
        w.f64(h(0, 1).real());
        w.f64(h(0, 1).imag());
    }
    return w.take();
}

MatrixCache decode_matrix_cache(const std::string& bytes) {
    Reader r(bytes, "HML2");
    MatrixCache c;
    double re = r.f64();
    c.gamma = {re, r.f64()};
    re = r.f64();
    c.omega = {re, r.f64()};
    c.R = r.f64();
    c.n = r.count();
    c.tol = r.f64();
    c.nodes.resize(static_cast<std::size_t>(c.n) * c.n);
    for (auto& e : c.nodes)
        for (double& v : e) v = r.f64();
    r.expect_end();
    return c;
}

void write_matrix_cache(const std::filesystem::path& path, const MatrixSolution& solution) {
    write_file_atomic(path, encode_matrix_cache(solution));
}

MatrixCache read_matrix_cache(const std::filesystem::path& path) { return decode_matrix_cache(read_file(path)); }

MatrixSolution restore_matrix(const MatrixCache& c, int max_iterations) {
    MatrixSolution s;
    s.problem = build_matrix_problem(c.gamma, c.omega, c.R, c.n, c.tol, max_iterations);
    std::vector<Eigen::Vector3d> X(c.nodes.size());
    for (std::size_t k = 0; k < c.nodes.size(); ++k) {
        const auto& e = c.nodes[k];
        Mat2 h;
        h << e[0], Complex(e[2], e[3]), Complex(e[2], -e[3]), e[1];
        X[k] = log_coordinates(h);
    }
    s.h = MetricField::from_log(s.problem.grid, std::move(X));
    s.residual_sup = hitchin_residual(s.h, s.problem).sup;
    for (std::size_t k = 0; k < s.h.X.size(); ++k)
        s.det_error = std::max(s.det_error, std::abs(s.h.h(k).determinant() - 1.0));
    return s;
}

}  // namespace hml
