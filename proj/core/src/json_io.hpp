#pragma once

// nlohmann::json conversions shared by the serializers and the CLI.

#include <json.hpp>

#include "adiabloch/io.hpp"

namespace adiabloch::detail {

using nlohmann::json;

json complex_json(cplx z, FloatFormat format = FloatFormat::decimal);
json matrix_json(const CMatrix& m, FloatFormat format = FloatFormat::decimal);
CMatrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& where);

json model_json(const LindbladModel& model, FloatFormat format);
json report_json(const ReproductionReport& report);
json decomposition_json(const SpectralDecomposition& dec, bool include_matrices);
json kantorovich_json(const KantorovichReport& kr);
json solution_json(const BlochSolution& sol, bool include_matrices);
json bound_json(const BoundReport& report);
json gkls_json(const GKLSForm& form);
json similarity_json(const SimilarityReport& rep);
json scaling_json(const ScalingReport& report);
json curve_json(const DistanceCurve& curve);

// Infinite and NaN values serialize as strings.
json number(double x);

}  // namespace adiabloch::detail
