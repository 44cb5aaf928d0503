#pragma once

#include "aar/config.hpp"
#include "aar/control_inner.hpp"

#include <string>

namespace aar {

std::string format_matrix(const Mat& M, const std::string& indent = "  ");

// Gains, closed-loop eigenvalues and Riccati residuals; throws on synthesis failure.
std::string synth_report(const PlantModel& plant, const LqrWeights& weights);
std::string synth_report(const CareProblem& problem);

}  // namespace aar
