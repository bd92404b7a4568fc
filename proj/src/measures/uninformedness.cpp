#include "fairplay/measures/uninformedness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairplay::measures {

void MeasureConfig::validate() const {
    if (!(log_floor > 0.0 && log_floor <= 1e-3)) throw std::invalid_argument("log floor must lie in (0, 1e-3]");
    if (epsilon_external < 0.0 || epsilon_intel < 0.0 || epsilon_surprise < 0.0 || delta_surprise < 0.0)
        throw std::invalid_argument("measure thresholds must be non-negative");
}

double uninformedness(std::span<const double> reference, std::span<const double> reader, double log_floor) {
    if (reference.size() != reader.size())
        throw std::invalid_argument("uninformedness: belief vectors have different dimensions");
    double h = 0.0;
    for (std::size_t y = 0; y < reference.size(); ++y)
        if (reference[y] != 0.0) h -= reference[y] * std::log(std::max(reader[y], log_floor));
    return h;
}

double uninformedness(const ProbVector& reference, const ProbVector& reader, const MeasureConfig& config) {
    return uninformedness(reference.weights(), reader.weights(), config.log_floor);
}

std::string SurpriseBands::label() const {
    if (strong) return "strongly-surprised";
    if (weak) return "weakly-surprised";
    return "not-surprised";
}

SurpriseBands classify_surprise(double expected_uninformedness, std::size_t roster_size, const MeasureConfig& config) {
    if (roster_size < 2) throw std::invalid_argument("surprise needs at least 2 suspects");
    const double uniform_level = std::log(static_cast<double>(roster_size));
    return SurpriseBands{
        expected_uninformedness >= uniform_level - config.epsilon_surprise,
        expected_uninformedness >= uniform_level + config.delta_surprise,
    };
}

}  // namespace fairplay::measures
