#pragma once

#include <string>

#include "sl3/fourier.hpp"

namespace sl3 {

// JSON coefficient models; layout in docs/formats.md. Numbers may be JSON numbers or
// decimal strings. Throws DomainError on malformed input.
CoefficientModel model_from_json(const std::string& text, prec_t p);
std::string model_to_json(const CoefficientModel& m, int digits = 0);

}  // namespace sl3
