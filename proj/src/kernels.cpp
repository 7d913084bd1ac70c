#include "fica/kernels.hpp"

#include <bit>

#include "fica/error.hpp"
#include "fica/gf.hpp"

namespace fica {

namespace {

void wht_serial(std::span<double> a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) {
                const double x = a[j];
                const double y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
}

void wht_parallel(std::span<double> a) {
    const auto n = static_cast<std::int64_t>(a.size());
    double* data = a.data();
    for (std::int64_t h = 1; h < n; h <<= 1) {
        const std::int64_t pairs = n / 2;
#pragma omp parallel for schedule(static) if (n >= (1 << 14))
        for (std::int64_t k = 0; k < pairs; ++k) {
            const std::int64_t j = (k / h) * 2 * h + (k % h);
            const double x = data[j];
            const double y = data[j + h];
            data[j] = x + y;
            data[j + h] = x - y;
        }
    }
}

// One coordinate pass of the modular-sum transform on a single group of q
// cells (stride apart), each cell holding q values. `tmp` has q*q slots.
inline void modular_group(double* base, std::size_t stride, std::uint32_t q, double* tmp) {
    for (std::uint32_t t = 0; t < q; ++t)
        for (std::uint32_t a = 0; a < q; ++a) {
            double acc = 0.0;
            for (std::uint32_t v = 0; v < q; ++v) {
                const std::uint32_t shift = (t * v) % q;
                const std::uint32_t src = (a + q - shift) % q;
                acc += base[v * stride * q + src];
            }
            tmp[t * q + a] = acc;
        }
    for (std::uint32_t t = 0; t < q; ++t)
        for (std::uint32_t a = 0; a < q; ++a) base[t * stride * q + a] = tmp[t * q + a];
}

}  // namespace

void walsh_hadamard(std::span<double> data, Execution exec) {
    if (!std::has_single_bit(data.size()) && !data.empty())
        throw DimensionError("Walsh-Hadamard length must be a power of two");
    if (exec == Execution::serial)
        wht_serial(data);
    else
        wht_parallel(data);
}

std::vector<double> modular_sum_transform(std::span<const double> probs, std::uint32_t q,
                                          std::size_t d, Execution exec) {
    const std::uint64_t size = checked_power(q, d);
    if (probs.size() != size) throw DimensionError("pmf length is not q^d");
    std::vector<double> cells(size * q, 0.0);
    for (std::uint64_t x = 0; x < size; ++x) cells[x * q] = probs[x];

    std::uint64_t stride = size;
    for (std::size_t j = 0; j < d; ++j) {
        stride /= q;  // q^(d-1-j): distance between neighbours along axis j
        const auto groups = static_cast<std::int64_t>(size / q);
        double* base = cells.data();
        if (exec == Execution::serial) {
            std::vector<double> tmp(std::size_t{q} * q);
            for (std::int64_t g = 0; g < groups; ++g) {
                const std::uint64_t outer = static_cast<std::uint64_t>(g) / stride;
                const std::uint64_t inner = static_cast<std::uint64_t>(g) % stride;
                modular_group(base + (outer * stride * q + inner) * q, stride, q, tmp.data());
            }
        } else {
#pragma omp parallel if (groups >= 4096)
            {
                std::vector<double> tmp(std::size_t{q} * q);
#pragma omp for schedule(static)
                for (std::int64_t g = 0; g < groups; ++g) {
                    const std::uint64_t outer = static_cast<std::uint64_t>(g) / stride;
                    const std::uint64_t inner = static_cast<std::uint64_t>(g) % stride;
                    modular_group(base + (outer * stride * q + inner) * q, stride, q, tmp.data());
                }
            }
        }
    }
    return cells;
}

std::vector<double> modular_sum_naive(std::span<const double> probs, std::uint32_t q,
                                      std::size_t d, Execution exec) {
    const std::uint64_t size = checked_power(q, d);
    if (probs.size() != size) throw DimensionError("pmf length is not q^d");
    std::vector<double> out(size * q, 0.0);
    const auto rows = static_cast<std::int64_t>(size);
#pragma omp parallel for schedule(dynamic, 16) if (exec == Execution::parallel)
    for (std::int64_t ri = 0; ri < rows; ++ri) {
        const FieldVector r = decode_word(static_cast<WordIndex>(ri), q, d);
        FieldVector x(d, 0);
        double* dst = out.data() + static_cast<std::uint64_t>(ri) * q;
        std::uint32_t dot = 0;  // <r, x> mod q, kept in step with x
        for (std::uint64_t xi = 0; xi < size; ++xi) {
            dst[dot] += probs[xi];
            // odometer increment of x in big-endian order
            for (std::size_t k = d; k-- > 0;) {
                if (++x[k] < q) {
                    dot = (dot + r[k]) % q;
                    break;
                }
                x[k] = 0;
                dot = (dot + r[k]) % q;  // -(q-1) r_k = r_k (mod q)
            }
        }
    }
    return out;
}

}  // namespace fica
