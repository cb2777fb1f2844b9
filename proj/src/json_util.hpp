#ifndef AUTOTUNE_JSON_UTIL_HPP
#define AUTOTUNE_JSON_UTIL_HPP

// Internal: shared JSON (de)serialization between report.cpp and config.cpp.

#include "autotune/trials.hpp"
#include "json.hpp"

namespace autotune {

nlohmann::ordered_json trial_config_to_json(const TrialConfig& c);
TrialConfig trial_config_from_json(const nlohmann::ordered_json& j);

}  // namespace autotune

#endif
