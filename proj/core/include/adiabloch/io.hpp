#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adiabloch/bloch.hpp"
#include "adiabloch/effective.hpp"
#include "adiabloch/evolution.hpp"
#include "adiabloch/liouville.hpp"
#include "adiabloch/reproduce.hpp"
#include "adiabloch/spectral.hpp"

namespace adiabloch {

// decimal: shortest round-trip decimal; hex: C99 hexadecimal float strings,
// exact.
enum class FloatFormat { decimal, hex };

// {dim, gamma, strong: {H, dissipators: [{rate, L}]}, weak: {...}} with complex
// entries as [re, im]. Parsing accepts either float format.
std::string model_to_json(const LindbladModel& model, FloatFormat format = FloatFormat::decimal);
// Throws std::invalid_argument on malformed input.
LindbladModel model_from_json(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

std::string report_to_json(const ReproductionReport& report);
std::string decomposition_to_json(const SpectralDecomposition& dec, bool include_matrices = false);
std::string bound_to_json(const BoundReport& report);
std::string gkls_to_json(const GKLSForm& form);
std::string scaling_to_json(const ScalingReport& report);

// Header t,distance,order,norm; 17 significant digits.
std::string curve_to_csv(const DistanceCurve& curve);
std::string curve_to_json(const DistanceCurve& curve);

}  // namespace adiabloch
