#include "fairplay/core/prob_vector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fairplay {

namespace {

double checked_total(const std::vector<double>& w) {
    if (w.empty()) throw SimplexError("probability vector must not be empty");
    double total = 0.0;
    for (double x : w) {
        if (!std::isfinite(x)) throw SimplexError("probability vector has a non-finite weight");
        if (x < 0.0) throw SimplexError("probability vector has a negative weight: " + std::to_string(x));
        total += x;
    }
    return total;
}

std::vector<double> scaled(std::vector<double> w, double total) {
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> weights) {
    const double total = checked_total(weights);
    if (std::abs(total - 1.0) > kSimplexTolerance)
        throw SimplexError("weights sum to " + std::to_string(total) + ", not 1");
    weights_ = scaled(std::move(weights), total);
}

ProbVector ProbVector::uniform(std::size_t n) {
    if (n == 0) throw SimplexError("uniform over zero suspects");
    return ProbVector(Trusted{}, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbVector ProbVector::point_mass(std::size_t n, std::size_t index) {
    if (index >= n) throw std::out_of_range("point mass index out of range");
    std::vector<double> w(n, 0.0);
    w[index] = 1.0;
    return ProbVector(Trusted{}, std::move(w));
}

ProbVector ProbVector::from_unnormalized(std::vector<double> weights) {
    const double total = checked_total(weights);
    if (!(total > 0.0)) throw SimplexError("cannot normalize a vector with zero total mass");
    return ProbVector(Trusted{}, scaled(std::move(weights), total));
}

ProbVector ProbVector::from_approximate(std::vector<double> weights, double tolerance) {
    const double total = checked_total(weights);
    if (std::abs(total - 1.0) > tolerance)
        throw SimplexError("weights sum to " + std::to_string(total) + ", outside tolerance");
    return ProbVector(Trusted{}, scaled(std::move(weights), total));
}

double ProbVector::at(std::size_t i) const {
    if (i >= weights_.size()) throw std::out_of_range("suspect index out of range");
    return weights_[i];
}

std::size_t ProbVector::argmax() const noexcept {
    return static_cast<std::size_t>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
}

bool ProbVector::approx_equal(const ProbVector& other, double tol) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (std::abs(weights_[i] - other.weights_[i]) > tol) return false;
    return true;
}

}  // namespace fairplay
