#include "commands.hpp"

#include <CLI11.hpp>
#include <sstream>

#include "congru/error.hpp"
#include "congru/probe.hpp"
#include "problem_file.hpp"

namespace congru::cli {

using nlohmann::json;

namespace {

struct Flags {
  std::string file;
  std::string strategy = "auto";
  unsigned degree_bound = Limits{}.max_degree;
  std::optional<std::size_t> length;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::string module;
  std::string mode = "defect0";
  std::string element;
  bool products = false;
  std::size_t count = 50;
  std::uint64_t prime = 3;
};

std::string ideal_str(const IdealO& i) { return i.to_string(); }

json module_json(const FinOModule& m) {
  json j;
  j["structure"] = m.to_string();
  const auto len = m.length();
  j["length"] = len ? json(*len) : json("infinite");
  return j;
}

json algebra_json(const AugmentedAlgebra& a) {
  json j;
  j["vars"] = a.ring().variables();
  std::vector<std::string> rels;
  for (const auto& f : a.relations()) rels.push_back(a.ring().to_string(f));
  j["relations"] = rels;
  json pt = json::object();
  for (std::size_t i = 0; i < a.nvars(); ++i)
    pt[a.ring().variables()[i]] = a.ring().to_string(Poly::constant(a.augmentation()[i]));
  j["augmentation"] = pt;
  j["codim"] = a.codim();
  return j;
}

CongruenceOptions options(const Flags& f, const ProblemFile& p) {
  CongruenceOptions o;
  o.strategy = parse_strategy(f.strategy);
  o.length = f.length;
  if (o.strategy == ResolutionStrategy::file) {
    if (p.resolution.empty()) throw Error(ErrorCode::InvalidArgument, "--strategy file needs a [resolution] section");
    o.user_resolution = p.resolution;
  }
  return o;
}

const AugmentedAlgebra& need_algebra(const ProblemFile& p) {
  if (!p.algebra) throw Error(ErrorCode::InvalidArgument, "this command needs [ring] and [augmentation]");
  return *p.algebra;
}

std::vector<NamedModule> selected_modules(const Flags& f, const ProblemFile& p) {
  std::vector<NamedModule> ms = p.modules;
  if (ms.empty()) ms.push_back({"A", FpModule::free(need_algebra(p))});
  if (f.module.empty()) return ms;
  for (const auto& m : ms)
    if (m.name == f.module) return {m};
  throw Error(ErrorCode::InvalidArgument, "no module named '" + f.module + "'");
}

json resolution_json(const FreeResolution& r) {
  json j;
  j["strategy"] = to_string(r.strategy);
  j["status"] = to_string(r.status);
  std::vector<std::size_t> ranks;
  for (std::size_t i = 0; i <= r.length(); ++i) ranks.push_back(r.rank(i));
  j["ranks"] = ranks;
  if (r.status == Certification::bounded_search) j["search_bound"] = r.search_bound;
  return j;
}

json criterion_json(const CriterionResult& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  if (c.condition2) j["condition2"] = *c.condition2;
  if (c.condition3) j["condition3"] = *c.condition3;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  if (c.ext_torsion_free) j["ext_torsion_free"] = *c.ext_torsion_free;
  j["notes"] = c.notes;
  return j;
}

json cmd_analyze(const Flags& f, const ProblemFile& p) {
  const AugmentedAlgebra& a = need_algebra(p);
  const CongruenceOptions o = options(f, p);
  json j;
  json alg = algebra_json(a);
  const CotangentData cot = cotangent_invariants(a);
  alg["cotangent"] = cot.cotangent.to_string();
  alg["phi"] = module_json(cot.phi);
  alg["fitt_c"] = ideal_str(cot.fitt_c);
  const RegularityReport reg = regularity_at_lambda(a);
  alg["regular_at_p"] = reg.regular_at_p;
  alg["regular_global"] = reg.regular_global;
  alg["eta"] = ideal_str(reg.eta);
  alg["resolution"] = resolution_json(*resolution_for(a, o));
  alg["notes"] = a.notes();
  if (reg.regular_at_p) {
    const SerreResult s = serre_check(a, false, o);
    alg["serre_ranks"] = s.ranks;
    alg["serre"] = to_string(s.verdict);
  }
  j["algebra"] = alg;
  json mods = json::array();
  for (const auto& [name, m] : selected_modules(f, p)) {
    const CongruenceReport r = congruence_report(m, o);
    json mj;
    mj["name"] = name;
    mj["mu"] = r.mu;
    mj["eta"] = ideal_str(r.eta);
    if (reg.regular_at_p) mj["psi"] = module_json(r.psi);
    json v = json::object();
    for (const auto& [k, verdict] : r.verdicts) v[k] = to_string(verdict);
    mj["verdicts"] = v;
    mj["warnings"] = r.warnings;
    mods.push_back(mj);
  }
  j["modules"] = mods;
  return j;
}

json cmd_invariant(const Flags& f, const ProblemFile& p, const std::string& which) {
  const AugmentedAlgebra& a = need_algebra(p);
  json j;
  if (which == "phi") {
    const CotangentData cot = cotangent_invariants(a);
    j["phi"] = module_json(cot.phi);
    j["cotangent"] = cot.cotangent.to_string();
    j["fitt_c"] = ideal_str(cot.fitt_c);
    return j;
  }
  const CongruenceOptions o = options(f, p);
  json mods = json::array();
  for (const auto& [name, m] : selected_modules(f, p)) {
    json mj;
    mj["name"] = name;
    if (which == "eta") mj["eta"] = ideal_str(eta(m, o));
    else mj["psi"] = module_json(psi(m, o));
    mods.push_back(mj);
  }
  j["modules"] = mods;
  return j;
}

AlgebraMap need_map(const ProblemFile& p) {
  if (!p.target) throw Error(ErrorCode::InvalidArgument, "this command needs [target] and [map] sections");
  return AlgebraMap(need_algebra(p), p.target->algebra, p.target->images);
}

json cmd_criterion(const Flags& f, const ProblemFile& p) {
  const CriterionMode mode = parse_criterion_mode(f.mode);
  const CongruenceOptions o = options(f, p);
  json j;
  j["mode"] = to_string(mode);
  if (mode == CriterionMode::iso || mode == CriterionMode::cotangent_iso) {
    j["map"] = criterion_json(numerical_criterion(need_map(p), mode, o));
    return j;
  }
  json mods = json::array();
  for (const auto& [name, m] : selected_modules(f, p)) {
    json mj = criterion_json(numerical_criterion(m, mode, o));
    mj["name"] = name;
    mods.push_back(mj);
  }
  j["modules"] = mods;
  return j;
}

json cmd_deform(const Flags& f, const ProblemFile& p) {
  const AugmentedAlgebra& a = need_algebra(p);
  if (f.element.empty()) throw Error(ErrorCode::InvalidArgument, "deform needs --element");
  const Poly el = a.ring().parse(f.element);
  const auto ms = selected_modules(f, p);
  const DeformationResult d = deformation_step(ms.front().module, el, options(f, p));
  json j;
  j["module"] = ms.front().name;
  j["element"] = a.ring().to_string(el);
  j["target"] = algebra_json(d.b);
  j["ord_f"] = ideal_str(d.ord_f);
  j["eta_a"] = ideal_str(d.eta_a);
  j["eta_b"] = ideal_str(d.eta_b);
  j["lhs"] = d.lhs ? json(*d.lhs) : json("infinite");
  j["rhs"] = d.rhs ? json(*d.rhs) : json("infinite");
  j["exact_sequence_holds"] = d.exact_sequence_holds;
  j["verdict"] = to_string(d.exact_sequence_holds ? Verdict::holds : Verdict::fails);
  return j;
}

json cmd_lattice(const ProblemFile& p) {
  if (!p.lattice) throw Error(ErrorCode::InvalidArgument, "this command needs a [lattice] section");
  const LatticeCongruence c = split_and_congruence(*p.lattice);
  json j;
  j["congruence_module"] = module_json(c.cong);
  j["discriminant"] = ideal_str(pairing_discriminant(*p.lattice, p.pairing));
  j["rank_l1"] = c.l1.cols();
  j["rank_l2"] = c.l2.cols();
  return j;
}

json cmd_serre(const Flags& f, const ProblemFile& p) {
  const SerreResult s = serre_check(need_algebra(p), f.products, options(f, p));
  json j;
  j["ranks"] = s.ranks;
  j["expected"] = s.expected;
  j["hom_cotangent_rank"] = s.hom_cotangent_rank;
  if (s.product_generates) j["product_generates"] = *s.product_generates;
  j["verdict"] = to_string(s.verdict);
  return j;
}

json cmd_invariance(const Flags& f, const ProblemFile& p) {
  const AlgebraMap phi = need_map(p);
  const InvarianceResult r = invariance_check(phi, FpModule::free(phi.target()), options(f, p));
  json j;
  j["target"] = algebra_json(phi.target());
  j["eta_source"] = ideal_str(r.eta_source);
  j["eta_target"] = ideal_str(r.eta_target);
  j["verdict"] = to_string(r.verdict);
  return j;
}

json cmd_probe(const Flags& f, const std::optional<ProblemFile>& p) {
  const Dvr dvr = p ? p->dvr : Dvr::p_adic(f.prime);
  const auto probes = probe_fitting_question(dvr, f.count, f.seed);
  json j;
  j["dvr"] = dvr.describe();
  j["count"] = f.count;
  j["seed"] = f.seed;
  json found = json::array();
  for (const auto& pr : probes)
    if (!pr.contained) {
      json e;
      e["instance"] = pr.description;
      e["fitt_c"] = ideal_str(pr.fitt_c);
      e["eta"] = ideal_str(pr.eta);
      found.push_back(e);
    }
  j["not_contained"] = found;
  j["contained_count"] = probes.size() - found.size();
  return j;
}

bool any_failure(const json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if ((it.key() == "verdict" || it.key() == "serre") && it->is_string() && *it == "fails") return true;
      if (it.key() == "verdicts" && it->is_object())
        for (const auto& v : *it)
          if (v == "fails") return true;
      if (any_failure(*it)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& e : j)
      if (any_failure(e)) return true;
  }
  return false;
}

void flatten_into(const json& j, const std::string& path, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    if (j.empty()) out[path] = "{}";
    for (auto it = j.begin(); it != j.end(); ++it) flatten_into(*it, path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    if (j.empty()) out[path] = "[]";
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out[path] = j.get<std::string>();
  } else {
    out[path] = j.dump();
  }
}

}  // namespace

std::map<std::string, std::string> flatten(const json& record) {
  std::map<std::string, std::string> out;
  flatten_into(record, "", out);
  return out;
}

std::string render_text(const json& record) {
  std::ostringstream os;
  for (const auto& [k, v] : flatten(record)) os << k << " = " << v << "\n";
  return os.str();
}

std::map<std::string, std::string> parse_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Congruence modules and ideals of augmented O-algebras"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* sub, bool file_required = true) {
    auto* opt = sub->add_option("file", f.file, "problem file");
    if (file_required) opt->required();
    sub->add_option("--strategy", f.strategy, "auto|koszul|matrix_factorization|shamash|syzygy|file");
    sub->add_option("--degree-bound", f.degree_bound, "monomial degree cap for standard bases");
    sub->add_option("--length", f.length, "resolution length (default c + 2)");
    sub->add_option("--format", f.format, "text|structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--seed", f.seed, "random seed");
  };
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"analyze", "eta", "psi", "phi", "criterion", "deform", "lattice", "serre", "invariance"}) {
    subs[name] = app.add_subcommand(name);
    common(subs[name]);
  }
  for (const char* name : {"analyze", "eta", "psi", "criterion", "deform"})
    subs[name]->add_option("--module", f.module, "restrict to one [module.NAME]");
  subs["criterion"]->add_option("--mode", f.mode, "defect0|wld|iso|cotangent_iso");
  subs["deform"]->add_option("--element", f.element, "polynomial f")->required();
  subs["serre"]->add_flag("--products", f.products, "also check the Yoneda product of degree-one classes");
  auto* probe = app.add_subcommand("probe-fitting-question");
  common(probe, false);
  probe->add_option("--count", f.count, "number of random algebras");
  probe->add_option("--p", f.prime, "residue characteristic when no file is given");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kComputed : kInputError;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  json record;
  record["command"] = cmd;
  int code = kComputed;
  try {
    Limits limits;
    limits.max_degree = f.degree_bound;
    std::optional<ProblemFile> p;
    if (!f.file.empty()) {
      p = load_problem(f.file, limits);
      record["file"] = f.file;
      record["dvr"] = p->dvr.describe();
    }
    json result;
    if (cmd == "analyze") result = cmd_analyze(f, *p);
    else if (cmd == "eta" || cmd == "psi" || cmd == "phi") result = cmd_invariant(f, *p, cmd);
    else if (cmd == "criterion") result = cmd_criterion(f, *p);
    else if (cmd == "deform") result = cmd_deform(f, *p);
    else if (cmd == "lattice") result = cmd_lattice(*p);
    else if (cmd == "serre") result = cmd_serre(f, *p);
    else if (cmd == "invariance") result = cmd_invariance(f, *p);
    else result = cmd_probe(f, p);
    record["result"] = result;
    if (any_failure(result)) code = kVerdictFails;
  } catch (const Error& e) {
    record["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    code = e.code() == ErrorCode::DegreeBoundExceeded ? kBoundExceeded : kInputError;
  }
  record["exit_code"] = code;

  if (f.format == "structured") out << record.dump(2) << "\n";
  else out << render_text(record);
  if (record.contains("error")) err << record["error"]["message"].get<std::string>() << "\n";
  return code;
}

}  // namespace congru::cli
