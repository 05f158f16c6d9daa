#include "spdelab/hermite.hpp"

#include "spdelab/errors.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <string>

namespace spdelab {

namespace {

constexpr int kMaxDegree = 1000;

// Number of Jacobi-matrix eigenvalues strictly below x.
int sturm_count_below(int p, double x) {
    int count = 0;
    double d = -x;
    if (d < 0.0) ++count;
    for (int i = 1; i < p; ++i) {
        if (d == 0.0) d = -1e-300;
        d = -x - static_cast<double>(i) / d;
        if (d < 0.0) ++count;
    }
    return count;
}

// He_p(x) / He_{p-1}(x), with the recurrence rescaled to stay in range.
double hermite_ratio(int p, double x) {
    double prev = 1.0;  // He_0
    double cur = x;     // He_1
    for (int k = 1; k < p; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
        const double m = std::max(std::abs(prev), std::abs(cur));
        if (m > 1e150) {
            prev /= m;
            cur /= m;
        }
    }
    return cur / prev;
}

double compute_zero(int p) {
    double lo = 0.0;
    double hi = 2.0 * std::sqrt(static_cast<double>(p)) + 1.0;
    for (int i = 0; i < 200 && hi - lo > 2e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sturm_count_below(p, mid) >= p ? hi : lo) = mid;
    }
    const double z = 0.5 * (lo + hi);
    const double ratio = hermite_ratio(p, z);
    // He_p' = p He_{p-1}, so the Newton step is ratio / p.
    const double polished = z - ratio / p;
    return std::isfinite(polished) && std::abs(polished - z) < 1e-8 * z ? polished : z;
}

std::array<std::atomic<double>, kMaxDegree / 2 + 1> g_cache{};

}  // namespace

double hermite_he(int p, double x) {
    if (p < 0) throw DomainError("hermite_he: degree must be >= 0");
    if (p == 0) return 1.0;
    double prev = 1.0;
    double cur = x;
    for (int k = 1; k < p; ++k) {
        const double next = x * cur - k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_he_derivative(int p, double x) {
    if (p <= 0) return 0.0;
    return p * hermite_he(p - 1, x);
}

double largest_hermite_zero(int p) {
    if (p < 2 || p > kMaxDegree || p % 2 != 0)
        throw DomainError("largest_hermite_zero: p must be even in [2, 1000], got " + std::to_string(p));
    auto& slot = g_cache[p / 2];
    double z = slot.load(std::memory_order_acquire);
    if (z > 0.0) return z;
    z = compute_zero(p);
    slot.store(z, std::memory_order_release);
    return z;
}

}  // namespace spdelab
