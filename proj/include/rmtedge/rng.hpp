#pragma once

#include <cstdint>

namespace rmtedge {

// Counter-based stream built on Philox4x32-10. A stream is addressed purely
// by (seed, stream_id), so replication r of a Monte-Carlo run can be drawn
// on any worker in any order with identical results.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {}

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double uniform();

    // Standard normal (Box-Muller).
    double normal();

    // Gamma(shape, scale 1) by Marsaglia-Tsang, shape boosting below 1.
    double gamma(double shape);

    // chi_df = sqrt(2 * Gamma(df/2)); requires df > 0.
    double chi(double df);

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int pos_ = 4;
};

// One chi_df draw from the (seed, stream) substream; df > 0.
double chi_sample(double df, RngStream& stream);

} // namespace rmtedge
