#pragma once

// Belief over suspects: a point on the probability simplex, stored in roster order.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fairplay {

// Sum-to-one tolerance for every ProbVector in the system.
inline constexpr double kSimplexTolerance = 1e-9;

class SimplexError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ProbVector {
public:
    // Accepts weights that already lie on the simplex (within kSimplexTolerance);
    // the tiny residual is renormalized away. Anything else throws SimplexError.
    explicit ProbVector(std::vector<double> weights);

    static ProbVector uniform(std::size_t n);
    static ProbVector point_mass(std::size_t n, std::size_t index);

    // Normalizes arbitrary non-negative weights with a positive total. Used where
    // the caller owns the normalization (posteriors, likelihood scores).
    static ProbVector from_unnormalized(std::vector<double> weights);

    // Parsing-boundary constructor: accepts vectors whose sum is within
    // `tolerance` of one and renormalizes them.
    static ProbVector from_approximate(std::vector<double> weights, double tolerance);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    double at(std::size_t i) const;
    std::span<const double> weights() const noexcept { return weights_; }

    std::size_t argmax() const noexcept;
    double max() const noexcept { return weights_[argmax()]; }

    bool approx_equal(const ProbVector& other, double tol) const;

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
    struct Trusted {};
    ProbVector(Trusted, std::vector<double> weights) : weights_(std::move(weights)) {}

    std::vector<double> weights_;
};

}  // namespace fairplay
