#include "ceo/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ceo/errors.hpp"

namespace ceo {

namespace {

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw ArgumentError(std::string(what) + " must be an array of numbers");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ArgumentError(std::string(what) + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::vector<std::vector<double>> rows(const Json& j, const char* key) {
  const Json& arr = j.is_object() ? (j.contains(key) ? j.at(key) : Json()) : j;
  if (!arr.is_array()) throw ArgumentError(std::string("expected an array under \"") + key + "\"");
  std::vector<std::vector<double>> out;
  for (const auto& row : arr) out.push_back(numbers(row, key));
  return out;
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_end = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << Json(it.key()).dump() << colon;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << pad_end << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // short numeric arrays stay on one line
      bool flat = true;
      for (const auto& x : j) flat = flat && x.is_primitive();
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << (indent > 0 ? ", " : ",");
          write(os, j[k], indent, depth + 1);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << "," << nl;
        os << pad;
        write(os, j[k], indent, depth + 1);
      }
      os << nl << pad_end << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format17(v);
      else
        os << '"' << (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")) << '"';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump17(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

CeoInstance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("sigma_x2") || !j.contains("sigma_n2"))
    throw ArgumentError("instance needs \"sigma_x2\" and \"sigma_n2\"");
  if (!j.at("sigma_x2").is_number()) throw ArgumentError("sigma_x2 must be a number");
  return CeoInstance::make(j.at("sigma_x2").get<double>(), numbers(j.at("sigma_n2"), "sigma_n2"));
}

CeoInstance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

RefinementQuery query_from_json(const Json& j) { return RefinementQuery{rows(j, "stages")}; }

std::vector<NoiseAllocation> chain_from_json(const Json& j) { return rows(j, "chain"); }

Json to_json(const CeoInstance& inst) {
  return Json{{"sigma_x2", inst.sigma_x2}, {"sigma_n2", inst.sigma_n2}};
}

Json subset_to_json(SubsetMask A) {
  Json out = Json::array();
  for (std::size_t i : A.members()) out.push_back(i + 1);
  return out;
}

Json permutation_to_json(const Permutation& pi) {
  Json out = Json::array();
  for (std::size_t i : pi) out.push_back(i + 1);
  return out;
}

Json to_json(const FaceDescriptor& f) {
  Json chain = Json::array(), blocks = Json::array();
  for (auto A : f.chain) chain.push_back(subset_to_json(A));
  for (auto B : f.blocks) blocks.push_back(subset_to_json(B));
  return Json{{"chain", chain}, {"blocks", blocks}, {"vacuous", subset_to_json(f.vacuous)},
              {"dimension", f.dimension}};
}

Json to_json(const HyperplaneResult& h) {
  return Json{{"alpha", h.alpha},   {"nu", h.nu},
              {"r_star", h.r_star}, {"phi", h.phi},
              {"contact_vertex", h.contact_vertex}, {"pi_star", permutation_to_json(h.pi_star)}};
}

Json to_json(const KktResidual& k) {
  return Json{{"stationarity", k.stationarity}, {"complementary", k.complementary}};
}

Json to_json(const InversionResult& r) {
  Json j{{"r_star", r.r_star},
         {"d_star", r.d_star},
         {"method", to_string(r.method)},
         {"residuals", r.residuals}};
  if (r.method == InversionMethod::closed_form_l2) j["branch"] = r.branch;
  return j;
}

Json to_json(const RefinementReport& r) {
  Json stages = Json::array();
  for (const auto& row : r.per_stage) {
    Json s = Json::array();
    for (const auto& e : row) s.push_back(Json{{"A", subset_to_json(e.A)}, {"slack", e.slack}});
    stages.push_back(s);
  }
  return Json{{"feasible", r.feasible},
              {"worst", Json{{"stage", r.worst_stage + 1},
                             {"A", subset_to_json(r.worst_set)},
                             {"slack", r.worst_slack}}},
              {"r_chain", r.r_chain},
              {"d_chain", r.d_chain},
              {"r_chain_monotone", r.r_chain_monotone},
              {"per_stage", stages}};
}

Json to_json(const Description& d) {
  return Json{{"encoder", d.encoder + 1}, {"stage", d.stage}, {"sigma_t2", d.sigma_t2_total}};
}

Json to_json(const Schedule& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps) {
    Json side = Json::array();
    for (const auto& d : st.side_info) side.push_back(to_json(d));
    steps.push_back(Json{{"encoder", st.description.encoder + 1},
                         {"stage", st.description.stage},
                         {"rate", st.rate},
                         {"sigma_t2", st.description.sigma_t2_total},
                         {"side_info", side}});
  }
  return Json{{"total_steps", s.total_steps}, {"steps", steps}};
}

Json to_json(const SimReport& s) {
  return Json{{"empirical_mse", s.empirical_mse},
              {"analytic_d", s.analytic_d},
              {"stderr", s.std_error},
              {"z_scores", s.z_scores}};
}

}  // namespace ceo
