#pragma once

#include <json.hpp>

#include "nadd/multifractal.hpp"

namespace nadd {

// Ordered JSON keeps field order stable across runs, which the report
// determinism contract depends on.
using Json = nlohmann::ordered_json;

Json to_json(const Sft& sft);
Sft sft_from_json(const Json& j);

Json to_json(const LocallyConstantPotential& f);
LocallyConstantPotential potential_from_json(const Sft& sft, const Json& j);

Json to_json(const Sft& sft, const PotentialSequence& seq);
PotentialSequence sequence_from_json(const Sft& sft, const Json& j);

Json to_json(const CylinderMeasure& mu);
CylinderMeasure measure_from_json(const Json& j);

Json to_json(const MarkovMeasure& mu);

Json to_json(const SeminormReport& r);
Json to_json(const BirkhoffExtrema& e);
Json to_json(const AdditivityReport& r);
Json to_json(const VariationReport& r);
Json to_json(const DefectTrace& t);
Json to_json(const CauchyTable& t);
// version field "cert_v1"
Json to_json(const EquivalenceCertificate& c);
Json to_json(const PressureEstimate& e);
Json to_json(const LyapunovTrace& t);
Json to_json(const GibbsReport& r);
Json to_json(const QuasiBernoulliReport& r);
Json to_json(const PressureCurve& c);
Json to_json(const SpectrumResult& s);
Json to_json(const RateFunction& r);

// Grids appear in configs either as explicit arrays or as
// {"lo": a, "hi": b, "count": n} shorthand.
std::vector<double> grid_from_json(const Json& j);
std::vector<int> int_grid_from_json(const Json& j);

// Doubles pass through; non-finite values become "inf"/"-inf" strings.
Json json_number(double v);

}  // namespace nadd
