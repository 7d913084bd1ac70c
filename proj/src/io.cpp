#include "fica/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "fica/error.hpp"

namespace fica {

namespace {

// Token stream that skips '#' comment lines.
class Tokens {
public:
    explicit Tokens(std::istream& in) : in_(in) {}

    bool next(std::string& tok) {
        while (!(line_ >> tok)) {
            std::string raw;
            if (!std::getline(in_, raw)) return false;
            const auto first = raw.find_first_not_of(" \t\r");
            if (first != std::string::npos && raw[first] == '#') raw.clear();
            line_ = std::istringstream(raw);
        }
        return true;
    }

    std::uint64_t integer(const char* what) {
        std::string tok;
        if (!next(tok)) throw FormatError(std::string("missing ") + what);
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.front() == '-')
            throw FormatError(std::string("bad ") + what + ": '" + tok + "'");
        return v;
    }

    double real(const char* what) {
        std::string tok;
        if (!next(tok)) throw FormatError(std::string("missing ") + what);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw FormatError(std::string("bad ") + what + ": '" + tok + "'");
        return v;
    }

    void expect_end() {
        std::string tok;
        if (next(tok)) throw FormatError("unexpected trailing token '" + tok + "'");
    }

private:
    std::istream& in_;
    std::istringstream line_;
};

std::uint32_t read_order(Tokens& t) {
    const auto q = t.integer("field order");
    if (q > std::numeric_limits<Element>::max() || !is_prime(static_cast<std::uint32_t>(q)))
        throw FormatError("field order " + std::to_string(q) + " is not a supported prime");
    return static_cast<std::uint32_t>(q);
}

Element read_element(Tokens& t, std::uint32_t q) {
    const auto v = t.integer("field element");
    if (v >= q) throw FormatError("entry " + std::to_string(v) + " is outside GF(" + std::to_string(q) + ")");
    return static_cast<Element>(v);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    return out;
}

}  // namespace

FieldMatrix read_matrix(std::istream& in) {
    Tokens t(in);
    const auto q = read_order(t);
    const auto d = static_cast<std::size_t>(t.integer("dimension"));
    if (d == 0) throw FormatError("matrix dimension must be positive");
    FieldMatrix m(PrimeField(q), d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m.set(r, c, read_element(t, q));
    t.expect_end();
    return m;
}

void write_matrix(std::ostream& out, const FieldMatrix& m) {
    if (!m.square()) throw DimensionError("matrix text format holds square matrices only");
    out << m.field().order() << ' ' << m.rows() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? " " : "") << m(r, c);
        out << '\n';
    }
}

SampleSet read_samples(std::istream& in) {
    Tokens t(in);
    const auto q = read_order(t);
    const auto d = static_cast<std::size_t>(t.integer("dimension"));
    const auto n = static_cast<std::size_t>(t.integer("sample count"));
    if (d == 0 || n == 0) throw FormatError("sample file needs d >= 1 and n >= 1");
    std::vector<Element> data;
    data.reserve(std::min<std::size_t>(n * d, std::size_t{1} << 24));
    for (std::size_t i = 0; i < n * d; ++i) data.push_back(read_element(t, q));
    t.expect_end();
    return {q, d, std::move(data)};
}

void write_samples(std::ostream& out, const SampleSet& s) {
    out << s.q() << ' ' << s.d() << ' ' << s.n() << '\n';
    for (std::size_t i = 0; i < s.n(); ++i) {
        const auto r = s.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << r[j];
        out << '\n';
    }
}

JointPMF read_pmf(std::istream& in, double max_log2) {
    Tokens t(in);
    const auto q = read_order(t);
    const auto d = static_cast<std::size_t>(t.integer("dimension"));
    if (d == 0) throw FormatError("dimension must be positive");
    const auto size = checked_power(q, d, max_log2);
    std::vector<double> probs(size);
    for (auto& p : probs) p = t.real("probability");
    t.expect_end();
    try {
        return {q, d, std::move(probs), max_log2};
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

void write_pmf(std::ostream& out, const JointPMF& p) {
    out << p.q() << ' ' << p.d() << '\n' << std::setprecision(17);
    for (auto v : p.probs()) out << v << '\n';
}

FieldMatrix load_matrix(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_matrix(in);
}

void save_matrix(const std::filesystem::path& path, const FieldMatrix& m) {
    auto out = open_out(path);
    write_matrix(out, m);
}

SampleSet load_samples(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_samples(in);
}

void save_samples(const std::filesystem::path& path, const SampleSet& s) {
    auto out = open_out(path);
    write_samples(out, s);
}

JointPMF load_pmf(const std::filesystem::path& path, double max_log2) {
    auto in = open_in(path);
    return read_pmf(in, max_log2);
}

void save_pmf(const std::filesystem::path& path, const JointPMF& p) {
    auto out = open_out(path);
    write_pmf(out, p);
}

std::vector<std::uint8_t> load_bytes(const std::filesystem::path& path) {
    auto in = open_in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void save_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace fica
