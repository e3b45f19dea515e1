#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ceo/core_model.hpp"
#include "ceo/hyperplane.hpp"
#include "ceo/inversion.hpp"
#include "ceo/montecarlo.hpp"
#include "ceo/polymatroid.hpp"
#include "ceo/refinement.hpp"
#include "ceo/scheduler.hpp"

namespace ceo {

using Json = nlohmann::ordered_json;

CeoInstance instance_from_json(const Json& j);
CeoInstance load_instance(const std::string& path);
Json read_json_file(const std::string& path);

// stages file: {"stages": [[...], ...]} or a bare array of rate vectors
RefinementQuery query_from_json(const Json& j);
// chain file: {"chain": [[...], ...]} or a bare array of allocations
std::vector<NoiseAllocation> chain_from_json(const Json& j);

// doubles at 17 significant digits; non-finite values become "inf" / "-inf" / "nan" strings
std::string dump17(const Json& j, int indent = 2);
std::string format17(double v);

Json to_json(const CeoInstance& inst);
Json subset_to_json(SubsetMask A);  // 1-based members
Json permutation_to_json(const Permutation& pi);
Json to_json(const FaceDescriptor& f);
Json to_json(const HyperplaneResult& h);
Json to_json(const KktResidual& k);
Json to_json(const InversionResult& r);
Json to_json(const RefinementReport& r);
Json to_json(const Description& d);
Json to_json(const Schedule& s);
Json to_json(const SimReport& s);

}  // namespace ceo
