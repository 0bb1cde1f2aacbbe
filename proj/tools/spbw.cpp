// command line front end: presentation files in, verdicts and reports out
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "spbw/assocprimes.hpp"
#include "spbw/report.hpp"
#include "spbw/shell.hpp"

using namespace spbw;
using nlohmann::json;

namespace {

struct Options {
  std::string file, preset, thm, mode = "fast", json_path;
  int degree = 1, trials = 20;
  uint64_t seed = 1, cap = 0;
  bool force = false;
  std::vector<std::string> args;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  Workspace ws;
  std::string input;  // text the digest is computed over
};

Loaded load(const Options& opt) {
  if (opt.cap) setenv("SPBW_CAP", std::to_string(opt.cap).c_str(), 1);
  if (!opt.file.empty() && !opt.preset.empty())
    fail(Err::MalformedPreset, "--file and --preset are mutually exclusive");
  if (!opt.file.empty()) {
    std::string text = slurp(opt.file);
    return {parse_presentation(text), text};
  }
  if (!opt.preset.empty()) return {load_preset(opt.preset), preset_text(opt.preset)};
  fail(Err::MalformedPreset, "one of --file or --preset is required");
}

RingPtr main_ring(const Workspace& ws) {
  if (ws.ext) return ws.ext->ring;
  if (ws.ring_decls.empty()) fail(Err::EmptyTarget, "no ring declared");
  return ws.ring_decls.front().ring;
}

uint64_t ideal_cap(const Options& opt) {
  if (opt.force) return 64;
  return opt.cap ? std::min<uint64_t>(opt.cap, 64) : 64;
}

json elem_list(const RingPtr& r, const std::vector<Code>& codes) {
  json out = json::array();
  for (Code c : codes) out.push_back(r->print(r->decode(c)));
  return out;
}

// sets above 64 elements are reported by generator instead of dumped
json set_summary(const RingPtr& r, const std::vector<Code>& codes) {
  json out;
  out["size"] = codes.size();
  if (codes.size() <= 64)
    out["elements"] = elem_list(r, codes);
  else if (auto g = principal_nilpotent_generator(r, codes))
    out["generator"] = r->print(*g);
  return out;
}

void finish(json& doc, const Options& opt) {
  std::cout << render_report(doc);
  if (!opt.json_path.empty()) emit_report(doc, opt.json_path);
}

int cmd_presets(const Options& opt) {
  json doc = make_report("presets", "", opt.seed, opt.mode);
  for (auto& [nm, text] : preset_catalog()) doc["results"].push_back(nm);
  finish(doc, opt);
  return 0;
}

int cmd_ring_info(const Options& opt) {
  Loaded l = load(opt);
  RingPtr r = main_ring(l.ws);
  json doc = make_report("ring-info", l.input, opt.seed, opt.mode);
  json res;
  res["ring"] = r->describe();
  if (r->symbolic()) {
    res["symbolic"] = true;
  } else {
    NilData nd = nil_data(r);
    res["cardinality"] = r->cardinality();
    res["commutative"] = r->commutative();
    res["ni"] = nd.is_ni;
    res["nilindex"] = nd.nilindex;
    res["two_primal"] = nd.is_2primal;
    res["nilradical"] = set_summary(r, nd.nilpotents);
    res["prime_radical_size"] = nd.prime_radical.size();
  }
  doc["results"].push_back(res);
  finish(doc, opt);
  return 0;
}

int cmd_check_compat(const Options& opt) {
  Loaded l = load(opt);
  RingPtr r = main_ring(l.ws);
  std::vector<RingMap> Sigma;
  std::vector<Derivation> Delta;
  for (auto& d : l.ws.map_decls) {
    if (d.is_deriv)
      Delta.push_back(l.ws.find_deriv(d.name));
    else
      Sigma.push_back(l.ws.find_endo(d.name));
  }
  if (Sigma.empty() && Delta.empty()) fail(Err::EmptyTarget, "no maps declared");
  CompatReport rep =
      check_compatibility(r, Sigma, Delta, r->symbolic(), opt.seed, opt.trials);
  json doc = make_report("check-compat", l.input, opt.seed, opt.mode);
  json res;
  res["sigma_strict"] = rep.sigma_strict;
  res["delta_strict"] = rep.delta_strict;
  res["sigma_weak"] = rep.sigma_weak;
  res["delta_weak"] = rep.delta_weak;
  res["exhaustive"] = rep.exhaustive;
  res["pairs_checked"] = rep.pairs_checked;
  for (auto& w : rep.witnesses)
    res["witnesses"].push_back({{"law", w.law},
                                {"map", w.map},
                                {"a", r->print(w.a)},
                                {"b", r->print(w.b)}});
  doc["results"].push_back(res);
  finish(doc, opt);
  return rep.strict() && rep.weak() ? 0 : 1;
}

int cmd_mul(const Options& opt) {
  Loaded l = load(opt);
  if (opt.args.size() != 2) fail(Err::EmptyTarget, "mul needs two polynomial arguments");
  SkewPoly f = parse_poly(l.ws, opt.args[0]);
  SkewPoly g = parse_poly(l.ws, opt.args[1]);
  std::string s = sp_print(nf_mul(f, g));
  std::cout << s << "\n";
  if (!opt.json_path.empty()) {
    json doc = make_report("mul", l.input, opt.seed, opt.mode);
    doc["results"].push_back(s);
    emit_report(doc, opt.json_path);
  }
  return 0;
}

int cmd_nilradical(const Options& opt) {
  Loaded l = load(opt);
  RingPtr r = main_ring(l.ws);
  NilData nd = nil_data(r);
  json doc = make_report("nilradical", l.input, opt.seed, opt.mode);
  json res = set_summary(r, nd.nilpotents);
  res["ni"] = nd.is_ni;
  doc["results"].push_back(res);
  finish(doc, opt);
  return 0;
}

NilMode nil_mode(const std::string& mode) {
  if (mode == "fast") return NilMode::criterion;
  if (mode == "brute") return NilMode::oracle;
  if (mode == "both") return NilMode::both;
  fail(Err::MalformedPreset, "--mode must be fast, brute, or both");
}

int cmd_nilpoly(const Options& opt) {
  Loaded l = load(opt);
  if (opt.args.size() != 1) fail(Err::EmptyTarget, "nilpoly needs one polynomial argument");
  SkewPoly f = parse_poly(l.ws, opt.args[0]);
  bool verdict = is_nilpotent_poly(*l.ws.ext, f, nil_mode(opt.mode));
  json doc = make_report("nilpoly", l.input, opt.seed, opt.mode);
  doc["results"].push_back({{"poly", sp_print(f)}, {"nilpotent", verdict}});
  finish(doc, opt);
  return verdict ? 0 : 1;
}

int cmd_weak_ann(const Options& opt) {
  Loaded l = load(opt);
  if (opt.args.empty()) fail(Err::EmptyTarget, "weak-ann needs target arguments");
  json doc = make_report("weak-ann", l.input, opt.seed, opt.mode);
  json res;
  AnnReport rep;
  RingPtr r = main_ring(l.ws);
  if (l.ws.ext) {
    std::vector<SkewPoly> U;
    for (auto& a : opt.args) U.push_back(parse_poly(l.ws, a));
    AnnMethod m = opt.mode == "fast"    ? AnnMethod::theorem_fastpath
                  : opt.mode == "brute" ? AnnMethod::brute_force
                                        : AnnMethod::both_agree;
    rep = weak_annihilator_ext(*l.ws.ext, U, opt.degree, m);
    res["degree_bound"] = rep.degree_bound;
    res["members_enumerated"] = rep.members.size();
    res["agree"] = rep.agree;
    if (!rep.witness.empty()) res["witness"] = rep.witness;
  } else {
    std::vector<Elem> X;
    for (auto& a : opt.args) X.push_back(parse_elem(r, a));
    rep = weak_annihilator_ring(r, X);
  }
  if (!rep.annihilator.empty() || !l.ws.ext)
    res["annihilator"] = set_summary(r, rep.annihilator);
  if (rep.principal_nilpotent_generator)
    res["generator"] = r->print(*rep.principal_nilpotent_generator);
  res["two_sided_mismatch"] = rep.two_sided_mismatch;
  doc["results"].push_back(res);
  finish(doc, opt);
  return rep.agree ? 0 : 1;
}

int cmd_good_poly(const Options& opt) {
  Loaded l = load(opt);
  if (opt.args.size() != 1) fail(Err::EmptyTarget, "good-poly needs one polynomial argument");
  SkewPoly f = parse_poly(l.ws, opt.args[0]);
  GoodResult g = make_nilpotent_good(*l.ws.ext, f);
  json doc = make_report("good-poly", l.input, opt.seed, opt.mode);
  doc["results"].push_back({{"multiplier", l.ws.ext->ring->print(g.r)},
                            {"result", sp_print(g.fr)},
                            {"steps", g.steps}});
  finish(doc, opt);
  return 0;
}

int cmd_quasi_primes(const Options& opt) {
  Loaded l = load(opt);
  RingPtr r = main_ring(l.ws);
  NassData d = nass_ring(r, ideal_cap(opt));
  json doc = make_report("quasi-primes", l.input, opt.seed, opt.mode);
  for (auto& c : d.certs) {
    json res;
    res["ideal_size"] = c.ideal.elements.size();
    res["generators"] = elem_list(r, c.ideal.generators);
    res["quasi_prime"] = c.is_quasi_prime;
    if (c.is_quasi_prime) res["annihilator"] = set_summary(r, c.ann);
    if (c.witness) res["witness_subideal"] = elem_list(r, c.witness->generators);
    doc["results"].push_back(res);
  }
  finish(doc, opt);
  return 0;
}

int cmd_nass(const Options& opt) {
  Loaded l = load(opt);
  RingPtr r = main_ring(l.ws);
  NassData d = nass_ring(r, ideal_cap(opt));
  json doc = make_report("nass", l.input, opt.seed, opt.mode);
  for (auto& p : d.nass) {
    json res = set_summary(r, p);
    if (auto g = principal_nilpotent_generator(r, p)) res["generator"] = r->print(*g);
    doc["results"].push_back(res);
  }
  finish(doc, opt);
  return 0;
}

int cmd_verify(const Options& opt) {
  Loaded l = load(opt);
  json doc = make_report("verify --thm " + opt.thm, l.input, opt.seed, opt.mode);
  json res;
  bool ok = false;
  if (opt.thm == "confluence") {
    if (!l.ws.ext) fail(Err::EmptyTarget, "no extension declared");
    ConfluenceReport rep = check_pbw_confluence(*l.ws.ext, opt.trials, opt.seed);
    ok = rep.ok;
    res["cases"] = rep.cases;
    res["exhaustive"] = rep.exhaustive;
    if (!rep.witness.empty()) res["witness"] = rep.witness;
  } else {
    if (!l.ws.ext) fail(Err::EmptyTarget, "no extension declared");
    Verdict v;
    if (opt.thm == "ann-subsets")
      v = verify_ann_theorem(*l.ws.ext, AnnTargetKind::subsets, opt.trials, opt.seed,
                             opt.degree);
    else if (opt.thm == "ann-principal")
      v = verify_ann_theorem(*l.ws.ext, AnnTargetKind::principal_ideals, opt.trials,
                             opt.seed, opt.degree);
    else if (opt.thm == "ann-element")
      v = verify_ann_theorem(*l.ws.ext, AnnTargetKind::single_elements, opt.trials,
                             opt.seed, opt.degree);
    else if (opt.thm == "armendariz")
      v = armendariz_check(*l.ws.ext, opt.trials, opt.seed);
    else if (opt.thm == "nass-ext")
      v = verify_nass_extension(*l.ws.ext, opt.degree, opt.trials, opt.seed,
                                uint64_t(1) << 20, ideal_cap(opt));
    else
      fail(Err::MalformedPreset, "unknown --thm '" + opt.thm + "'");
    ok = v.ok;
    res["trials"] = v.trials;
    res["failures"] = v.failures;
  }
  res["verdict"] = ok;
  doc["results"].push_back(res);
  finish(doc, opt);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skew PBW extension workbench"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* c, bool with_args = false) {
    c->add_option("--file", opt.file, "presentation file");
    c->add_option("--preset", opt.preset, "preset name from the catalog");
    c->add_option("--degree", opt.degree, "degree bound");
    c->add_option("--trials", opt.trials, "trial count");
    c->add_option("--seed", opt.seed, "random seed (recorded in the report)");
    c->add_option("--mode", opt.mode, "fast | brute | both");
    c->add_option("--json", opt.json_path, "write the JSON report here");
    c->add_option("--cap", opt.cap, "cardinality cap override");
    c->add_flag("--force", opt.force, "lift the ideal lattice cap to its hard limit");
    if (with_args) c->add_option("args", opt.args, "positional arguments");
    return c;
  };

  auto* presets = add_common(app.add_subcommand("presets", "list shipped presets"));
  auto* info = add_common(app.add_subcommand("ring-info", "coefficient ring facts"));
  auto* compat =
      add_common(app.add_subcommand("check-compat", "compatibility of declared maps"));
  auto* mul = add_common(app.add_subcommand("mul", "multiply two polynomials"), true);
  auto* nilr = add_common(app.add_subcommand("nilradical", "nilpotent elements of the ring"));
  auto* nilp = add_common(app.add_subcommand("nilpoly", "is a polynomial nilpotent"), true);
  auto* wann = add_common(app.add_subcommand("weak-ann", "weak annihilator of targets"), true);
  auto* good =
      add_common(app.add_subcommand("good-poly", "make a polynomial nilpotent good"), true);
  auto* qp = add_common(app.add_subcommand("quasi-primes", "right ideal lattice verdicts"));
  auto* nass = add_common(app.add_subcommand("nass", "nilpotent associated primes"));
  auto* verify = add_common(app.add_subcommand("verify", "run a theorem harness"));
  verify->add_option("--thm", opt.thm,
                     "ann-subsets | ann-principal | ann-element | armendariz | nass-ext | "
                     "confluence")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (presets->parsed()) return cmd_presets(opt);
    if (info->parsed()) return cmd_ring_info(opt);
    if (compat->parsed()) return cmd_check_compat(opt);
    if (mul->parsed()) return cmd_mul(opt);
    if (nilr->parsed()) return cmd_nilradical(opt);
    if (nilp->parsed()) return cmd_nilpoly(opt);
    if (wann->parsed()) return cmd_weak_ann(opt);
    if (good->parsed()) return cmd_good_poly(opt);
    if (qp->parsed()) return cmd_quasi_primes(opt);
    if (nass->parsed()) return cmd_nass(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // a failed mathematical hypothesis is a verdict, not a usage problem
    return e.kind() == Err::HypothesisFailedRingSide ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
