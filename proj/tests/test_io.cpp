#include <filesystem>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fica/distributions.hpp"
#include "fica/error.hpp"
#include "fica/io.hpp"

using namespace fica;

namespace {

template <typename F>
auto parse(const std::string& text, F reader) {
    std::istringstream in(text);
    return reader(in);
}

FieldMatrix matrix_from(const std::string& text) {
    return parse(text, [](std::istream& in) { return read_matrix(in); });
}
SampleSet samples_from(const std::string& text) {
    return parse(text, [](std::istream& in) { return read_samples(in); });
}
JointPMF pmf_from(const std::string& text) {
    return parse(text, [](std::istream& in) { return read_pmf(in); });
}

}  // namespace

TEST_CASE("matrix text format") {
    const auto m = matrix_from("# comment\n3 2\n1 2\n0 1\n");
    CHECK(m == FieldMatrix::from_rows(PrimeField(3), {{1, 2}, {0, 1}}));
    std::ostringstream out;
    write_matrix(out, m);
    CHECK(matrix_from(out.str()) == m);

    CHECK_THROWS_AS(matrix_from("4 2\n1 0\n0 1\n"), FormatError);
    CHECK_THROWS_AS(matrix_from("3 2\n1 3\n0 1\n"), FormatError);
    CHECK_THROWS_AS(matrix_from("3 2\n1 2\n0\n"), FormatError);
    CHECK_THROWS_AS(matrix_from("3 2\n1 2\n0 1 1\n"), FormatError);
    CHECK_THROWS_AS(matrix_from("3 2\n1 x\n0 1\n"), FormatError);
    CHECK_THROWS_AS(matrix_from("3 0\n"), FormatError);
    CHECK_THROWS_AS(matrix_from(""), FormatError);
}

TEST_CASE("sample text format") {
    const auto s = samples_from("2 3 2\n0 1 1\n# skipped\n1 0 0\n");
    CHECK(s == SampleSet(2, 3, {0, 1, 1, 1, 0, 0}));
    const auto z = sample_zipf(64, 1.01, 300, 1).to_samples(2, 6);
    std::ostringstream out;
    write_samples(out, z);
    CHECK(samples_from(out.str()) == z);

    CHECK_THROWS_AS(samples_from("2 3 2\n0 1 1\n"), FormatError);
    CHECK_THROWS_AS(samples_from("2 3 1\n0 1 2\n"), FormatError);
    CHECK_THROWS_AS(samples_from("2 3 0\n"), FormatError);
    CHECK_THROWS_AS(samples_from("2 3 1\n0 1 -1\n"), FormatError);
    CHECK_THROWS_AS(samples_from("6 1 1\n0\n"), FormatError);
}

TEST_CASE("pmf text format") {
    const auto p = pmf_from("2 2\n0.4 0.1 0.2 0.3\n");
    CHECK(p[1] == doctest::Approx(0.1));
    Rng rng(1);
    const auto r = sample_uniform_simplex_pmf(3, 3, rng);
    std::ostringstream out;
    write_pmf(out, r);
    const auto back = pmf_from(out.str());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(back[i] == r[i]);

    CHECK_THROWS_AS(pmf_from("2 2\n0.4 0.1 0.2\n"), FormatError);
    CHECK_THROWS_AS(pmf_from("2 2\n0.4 0.1 0.2 0.3 0.0\n"), FormatError);
    CHECK_THROWS_AS(pmf_from("2 2\n0.4 0.1 0.2 abc\n"), FormatError);
    CHECK_THROWS(pmf_from("2 2\n0.5 0.5 0.5 0.5\n"));
    CHECK_THROWS(pmf_from("2 1\n1.5 -0.5\n"));
    CHECK_THROWS_AS(pmf_from("2 40\n"), CapacityError);
}

TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "fica_test_io";
    std::filesystem::create_directories(dir);
    const auto m = FieldMatrix::from_rows(PrimeField(5), {{1, 4, 0}, {2, 2, 2}, {0, 0, 3}});
    save_matrix(dir / "m.txt", m);
    CHECK(load_matrix(dir / "m.txt") == m);

    const SampleSet s(3, 2, {0, 1, 2, 2});
    save_samples(dir / "s.txt", s);
    CHECK(load_samples(dir / "s.txt") == s);

    const auto p = JointPMF::uniform(2, 3);
    save_pmf(dir / "p.txt", p);
    CHECK(load_pmf(dir / "p.txt")[5] == doctest::Approx(0.125));

    const std::vector<std::uint8_t> bytes{0, 1, 2, 255, 10, 13};
    save_bytes(dir / "b.bin", bytes);
    CHECK(load_bytes(dir / "b.bin") == bytes);

    CHECK_THROWS_AS(load_samples(dir / "missing.txt"), FormatError);
    CHECK_THROWS_AS(load_bytes(dir / "missing.bin"), FormatError);
    std::filesystem::remove_all(dir);
}
