#pragma once

#include "json.hpp"
#include "nnls/analysis.hpp"
#include "nnls/groundstate.hpp"
#include "nnls/hypotheses.hpp"
#include "nnls/nehari.hpp"

namespace nnls {

nlohmann::json to_json(const Point& x, int dim);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const NehariState& s);
nlohmann::json to_json(const ConcentrationReport& r, int dim);
nlohmann::json to_json(const DecayFit& f, int dim);
nlohmann::json to_json(const ModificationReport& r, int dim);
nlohmann::json to_json(const LocalizationReport& r);
nlohmann::json to_json(const AprioriQuantities& q);
nlohmann::json to_json(const AprioriReport& r);
nlohmann::json to_json(const GroundState& g);
nlohmann::json to_json(const MonotonicityReport& r);

}  // namespace nnls
