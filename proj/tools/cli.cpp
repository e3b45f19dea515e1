#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "ceo/errors.hpp"
#include "ceo/json_io.hpp"

namespace ceo::cli {

namespace {

struct Domain {
  bool answer = true;  // false -> exit code 1
};

std::vector<double> parse_vector(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok == "CAP" || tok == "cap" || tok == "inf") {
      v.push_back(kCap);
      continue;
    }
    double x = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
      throw ArgumentError(std::string("bad number '") + tok + "' in " + what);
    v.push_back(x);
  }
  if (v.empty()) throw ArgumentError(std::string(what) + " is empty");
  return v;
}

// rate-valued fields copied into a display block in bits
const std::set<std::string> kRateKeys = {"R",     "r_star", "phi",     "contact_vertex", "slack",
                                         "rate",  "r_chain", "margins", "sum_rate"};

Json to_bits(const Json& j, bool convert) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      out[it.key()] = to_bits(it.value(), convert || kRateKeys.count(it.key()) > 0);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& x : j) out.push_back(to_bits(x, convert));
    return out;
  }
  if (convert && j.is_number_float()) return j.get<double>() / std::log(2.0);
  return j;
}

std::string cap_or(double v) { return is_cap(v) ? "CAP" : format17(v); }

struct Globals {
  std::string instance_path;
  std::string output = "-";
  std::string format = "json";
  bool bits = false;
  std::optional<double> tol;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic Gaussian CEO rate region toolkit (all rates in nats)", "ceo"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--instance", g.instance_path, "instance JSON file");
  app.add_option("--output", g.output, "output path, - for stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--bits", g.bits, "also display rates in bits");
  app.add_option("--tol", g.tol, "tolerance");

  std::string r_s, R_s, alpha_s, from_s, grid_s, stages_path, chain_path, method = "face";
  double D = 0.0;
  std::uint64_t n = 1000000, seed = 42;
  bool pairwise = false;

  auto* region = app.add_subcommand("region", "rate region of an allocation");
  region->require_subcommand(1);
  auto* vertices = region->add_subcommand("vertices", "all L! vertices");
  vertices->add_option("--r", r_s)->required();
  auto* check = region->add_subcommand("check", "membership test");
  check->add_option("--r", r_s)->required();
  check->add_option("--R", R_s)->required();
  auto* face = region->add_subcommand("face", "smallest face of the dominant face holding R");
  face->add_option("--r", r_s)->required();
  face->add_option("--R", R_s)->required();

  auto* hyper = app.add_subcommand("hyperplane", "supporting hyperplane of R(D)");
  hyper->add_option("--alpha", alpha_s)->required();
  hyper->add_option("--D", D)->required();

  auto* invert = app.add_subcommand("invert", "r*(R) and D*(R)");
  invert->add_option("--R", R_s)->required();

  auto* omega = app.add_subcommand("omega", "region tag of a rate pair");
  omega->add_option("--R", R_s)->required();

  auto* omap = app.add_subcommand("omega-map", "grid of region tags and reachability");
  omap->add_option("--from", from_s);
  omap->add_option("--grid", grid_s, "min,max,step")->required();

  auto* refine = app.add_subcommand("refine", "successive refinement feasibility");
  refine->add_option("--stages", stages_path)->required();
  refine->add_flag("--pairwise", pairwise, "also run the pairwise decomposition check");

  auto* sched = app.add_subcommand("schedule", "successive Wyner-Ziv schedule");
  sched->add_option("--r", r_s)->required();
  sched->add_option("--R", R_s)->required();
  sched->add_option("--method", method)->check(CLI::IsMember({"face", "peel"}));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo distortion check");
  sim->add_option("--r", r_s);
  sim->add_option("--chain", chain_path);
  sim->add_option("--n", n);
  sim->add_option("--seed", seed);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Domain dom;
  Json result = Json::object();
  std::string csv;
  try {
    if (g.instance_path.empty()) throw ArgumentError("--instance is required");
    const CeoInstance inst = load_instance(g.instance_path);
    auto vec = [&](const std::string& s, const char* what) { return parse_vector(s, what); };

    if (*vertices) {
      const auto r = vec(r_s, "--r");
      check_allocation(inst, r);
      Json list = Json::array();
      for (const auto& pi : all_permutations(inst.L()))
        list.push_back(Json{{"pi", permutation_to_json(pi)}, {"R", vertex(inst, r, pi)}});
      result["sum_rate"] = rank_f(inst, r, SubsetMask::full(inst.L()));
      result["vertices"] = list;
    } else if (*check) {
      const auto r = vec(r_s, "--r");
      const auto R = vec(R_s, "--R");
      const double tol = g.tol.value_or(kTolEq);
      SubsetMask where;
      const double slack = region_slack(inst, r, R, &where);
      dom.answer = region_contains(inst, r, R, tol);
      result["contains"] = dom.answer;
      result["slack"] = slack;
      result["witness"] = subset_to_json(where);
      result["on_dominant_face"] = dom.answer && on_dominant_face(inst, r, R, tol);
    } else if (*face) {
      const auto r = vec(r_s, "--r");
      const auto R = vec(R_s, "--R");
      result["face"] = to_json(identify_face(inst, r, R, g.tol.value_or(1e-7)));
    } else if (*hyper) {
      const auto h = support_value(inst, vec(alpha_s, "--alpha"), D);
      result = to_json(h);
      result["kkt"] = to_json(kkt_residual(inst, h));
    } else if (*invert) {
      result = to_json(r_star(inst, vec(R_s, "--R")));
    } else if (*omega) {
      const auto R = vec(R_s, "--R");
      const auto tag = classify_omega(inst, R, g.tol.value_or(1e-7));
      const auto m = omega_margins(inst, R);
      result["region"] = to_string(tag);
      result["margins"] = Json::array({m[0], m[1]});
    } else if (*omap) {
      if (inst.L() != 2) throw ArgumentError("omega-map needs L = 2");
      const auto gv = vec(grid_s, "--grid");
      if (gv.size() != 3) throw ArgumentError("--grid takes min,max,step");
      const GridAxis ax{gv[0], gv[1], gv[2]};
      if (ax.min < 0.0) throw ArgumentError("--grid min must be >= 0");
      const std::size_t cnt = ax.count();
      const double tol = g.tol.value_or(kRefineTol);
      std::optional<ReachableMap> reach;
      if (!from_s.empty()) {
        const auto from = vec(from_s, "--from");
        reach = reachable_set_l2(inst, from, ax, ax, tol);
      }
      struct Row {
        std::string tag;
        InversionResult inv;
      };
      std::vector<Row> rows(cnt * cnt);
      parallel_for(rows.size(), [&](std::size_t k) {
        const RateVector R{ax.at(k / cnt), ax.at(k % cnt)};
        rows[k].tag = (is_cap(R[0]) || is_cap(R[1])) ? "CAP" : to_string(classify_omega(inst, R));
        rows[k].inv = r_star(inst, R);
      });
      if (g.format == "csv") {
        std::ostringstream os;
        os << "R1,R2,region,d_star,r1_star,r2_star,reachable\n";
        for (std::size_t k = 0; k < rows.size(); ++k) {
          os << cap_or(ax.at(k / cnt)) << ',' << cap_or(ax.at(k % cnt)) << ',' << rows[k].tag << ','
             << format17(rows[k].inv.d_star) << ',' << cap_or(rows[k].inv.r_star[0]) << ','
             << cap_or(rows[k].inv.r_star[1]) << ',';
          if (reach) os << (reach->reachable[k] ? 1 : 0);
          os << '\n';
        }
        csv = os.str();
      } else {
        Json list = Json::array();
        for (std::size_t k = 0; k < rows.size(); ++k) {
          Json row{{"R", Json::array({ax.at(k / cnt), ax.at(k % cnt)})},
                   {"region", rows[k].tag},
                   {"d_star", rows[k].inv.d_star},
                   {"r_star", rows[k].inv.r_star}};
          if (reach) row["reachable"] = reach->reachable[k] != 0;
          list.push_back(row);
        }
        result["grid"] = list;
      }
    } else if (*refine) {
      const auto q = query_from_json(read_json_file(stages_path));
      const double tol = g.tol.value_or(kRefineTol);
      const auto rep = check_refinement(inst, q, tol);
      dom.answer = rep.feasible;
      result = to_json(rep);
      if (pairwise) result["pairwise_equivalence"] = pairwise_equivalence(inst, q, tol);
    } else if (*sched) {
      const auto r = vec(r_s, "--r");
      const auto R = vec(R_s, "--R");
      check_allocation(inst, r);
      check_rates(inst, R);
      const double tol = g.tol.value_or(kTolEq);
      const Schedule s =
          method == "face" ? schedule_for_face(inst, r, R, tol) : build_schedule(inst, r, R, tol);
      result = to_json(s);
    } else if (*sim) {
      SimConfig cfg;
      cfg.n_samples = n;
      cfg.seed = seed;
      if (chain_path.empty() == r_s.empty()) throw ArgumentError("give exactly one of --r or --chain");
      result = chain_path.empty()
                   ? to_json(simulate_distortion(inst, vec(r_s, "--r"), cfg))
                   : to_json(simulate_refinement(inst, chain_from_json(read_json_file(chain_path)), cfg));
      result["n_samples"] = n;
      result["seed"] = seed;
    }
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }

  std::string text;
  if (!csv.empty()) {
    text = csv;
  } else {
    Json doc = Json{{"units", "nats"}};
    for (auto it = result.begin(); it != result.end(); ++it) doc[it.key()] = it.value();
    if (g.bits) doc["display_bits"] = to_bits(result, false);
    text = dump17(doc) + "\n";
  }
  if (g.output == "-") {
    out << text;
  } else {
    std::ofstream f(g.output);
    if (!f) {
      err << "error: cannot write " << g.output << "\n";
      return 2;
    }
    f << text;
  }
  return dom.answer ? 0 : 1;
}

}  // namespace ceo::cli
