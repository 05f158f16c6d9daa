#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace spdelab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11): a keyed
/// bijection of a 128-bit counter. Every (path, step, cell) gets its own
/// counter, so draws do not depend on evaluation order or thread layout.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Standard normal draws for one ensemble path, addressed by (step, cell).
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t path) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path) {}

    /// Fills `out` with the normals of time step `step`; cell i always gets
    /// the same value for a given (seed, path, step).
    void fill(std::uint64_t step, std::span<double> out) const noexcept {
        const std::size_t n = out.size();
        for (std::size_t pair = 0; 2 * pair < n; ++pair) {
            const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(step),
                                             static_cast<std::uint32_t>(path_),
                                             static_cast<std::uint32_t>(path_ >> 32) ^
                                                 (static_cast<std::uint32_t>(step >> 32) << 16)};
            const auto r = Philox4x32::block(ctr, key_);
            const double u1 = to_unit_open(r[0], r[1]);
            const double u2 = to_unit_open(r[2], r[3]);
            // Box-Muller.
            const double radius = std::sqrt(-2.0 * std::log(u1));
            const double angle = 2.0 * std::numbers::pi * u2;
            out[2 * pair] = radius * std::cos(angle);
            if (2 * pair + 1 < n) out[2 * pair + 1] = radius * std::sin(angle);
        }
    }

    /// Uniform on (0, 1] with 53 random bits.
    static double to_unit_open(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return static_cast<double>(bits + 1) * 0x1.0p-53;
    }

private:
    Philox4x32::Key key_;
    std::uint64_t path_;
};

}  // namespace spdelab
