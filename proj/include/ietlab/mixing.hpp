#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "ietlab/roof.hpp"

namespace ietlab {

// Either a constant or a product bump b((x-cx)/wx) b((y-cy)/wy) with b(u) = (1-u^2)^2 on |u| < 1.
struct Observable {
    enum class Kind { Bump, Constant };
    Kind kind = Kind::Bump;
    double cx = 0.5, wx = 0.1, cy = 0.5, wy = 0.1;
    double c = 1.0;
    bool centered = false;

    static Observable bump(double cx, double wx, double cy, double wy, bool centered = false);
    static Observable constant(double c);

    double raw(double x, double y) const;
    // Integrals of raw and raw^2 against dx dy over the region under the roof.
    double raw_integral(double area) const;
    double raw_square_integral(double area) const;
};

// An observable resolved against a roof: value = raw - offset, with exact mean and second moment under mu.
struct BoundObservable {
    Observable obs;
    double offset = 0.0;
    double mean = 0.0;
    double second_moment = 0.0;

    double operator()(double x, double y) const { return obs.raw(x, y) - offset; }
    double variance() const { return second_moment - mean * mean; }
};

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

// Monte-Carlo probes of the special flow in double precision.
class MixingProbe {
public:
    MixingProbe(const RoofSpec& spec, const Iet& T);

    double area() const { return area_; }
    BoundObservable bind(const Observable& o) const;
    // Checks that a bump's support lies under the graph of the roof.
    bool support_under_graph(const Observable& o, std::size_t grid = 2000) const;

    // Point i of the stream: x with density f / area, then y uniform in [0, f(x)).
    std::pair<double, double> sample(std::uint64_t seed, std::uint64_t i) const;
    std::pair<double, double> flow(double x, double y, double t) const;

    Estimate correlation(const BoundObservable& g, const BoundObservable& h, double t, std::size_t n,
                         std::uint64_t seed, bool parallel = true) const;
    Estimate triple(const BoundObservable& g1, const BoundObservable& g2, const BoundObservable& g3, double t2,
                    double t3, std::size_t n, std::uint64_t seed, bool parallel = true) const;

    static constexpr std::size_t kChunk = 8192;

private:
    RoofView roof_;
    IetView inv_;
    double area_ = 0.0;
    std::vector<double> weights_;  // cumulative component weights
    std::vector<int> comp_pos_;    // top position per component, -1 for the flat part
    std::vector<int> comp_side_;   // 0 flat, +1 right of l, -1 left of r
    std::vector<double> comp_len_;

    template <class F>
    Estimate run(std::size_t n, bool parallel, F&& per_sample) const;
};

}  // namespace ietlab
