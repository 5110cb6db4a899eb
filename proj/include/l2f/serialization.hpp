#pragma once

#include <json.hpp>

#include "l2f/leastsq.hpp"
#include "l2f/measures.hpp"
#include "l2f/pipeline.hpp"
#include "l2f/simlab.hpp"

namespace l2f {

nlohmann::json to_json(const SMZMeasure& mu);
nlohmann::json to_json(const HermiteExpansion& e);
nlohmann::json to_json(const EstimationResult& r);
nlohmann::json to_json(const L2FTrace& trace);
nlohmann::json to_json(const BatchStats& stats);

SMZMeasure measure_from_json(const nlohmann::json& doc);
HermiteExpansion expansion_from_json(const nlohmann::json& doc);

}  // namespace l2f
