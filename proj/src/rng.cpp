#include "rmtedge/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rmtedge {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t out0 = hi1 ^ ctr[1] ^ k0;
    const std::uint32_t out2 = hi0 ^ ctr[3] ^ k1;
    ctr[0] = out0;
    ctr[1] = lo1;
    ctr[2] = out2;
    ctr[3] = lo0;
}

void philox4x32_10(std::uint32_t ctr[4], std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
}

} // namespace

void RngStream::refill() {
    buf_[0] = static_cast<std::uint32_t>(block_);
    buf_[1] = static_cast<std::uint32_t>(block_ >> 32);
    buf_[2] = static_cast<std::uint32_t>(stream_);
    buf_[3] = static_cast<std::uint32_t>(stream_ >> 32);
    philox4x32_10(buf_, static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32));
    ++block_;
    pos_ = 0;
}

std::uint32_t RngStream::next_u32() {
    if (pos_ >= 4) refill();
    return buf_[pos_++];
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    // 53 significant bits centered in (0, 1); never returns an endpoint
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RngStream::gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: requires shape > 0");
    if (shape < 1.0) {
        const double g = gamma(shape + 1.0);
        return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double RngStream::chi(double df) {
    if (!(df > 0.0)) throw std::domain_error("chi: requires df > 0");
    return std::sqrt(2.0 * gamma(0.5 * df));
}

double chi_sample(double df, RngStream& stream) { return stream.chi(df); }

} // namespace rmtedge
