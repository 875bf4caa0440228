#pragma once

#include <span>
#include <string>

namespace caarl {

double mean(std::span<const double> xs) noexcept;

/// Divides by the sample count; zero for spans shorter than two.
double population_variance(std::span<const double> xs) noexcept;

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace caarl
