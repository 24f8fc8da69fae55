#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "demibit/circuit_builder.hpp"
#include "demibit/cli.hpp"
#include "demibit/errors.hpp"
#include "demibit/experiments.hpp"
#include "demibit/learner.hpp"
#include "demibit/measure.hpp"
#include "demibit/netlist.hpp"
#include "demibit/reduction.hpp"
#include "text_util.hpp"

namespace demibit::cli {

namespace {

struct CsvRow {
  std::string kind;
  std::string generator;
  std::string adversary;
  std::optional<Rational> advantage;
  std::string zero_on_image;
  std::string s_witness;
  std::string holds;
  std::string detail;
};

struct Section {
  std::vector<std::string> lines;
  std::vector<CsvRow> rows;
  int status = kExitOk;
  std::string status_text = "ok";

  void add(const std::string& key, const std::string& value) { lines.push_back(key + " " + value); }
  void violation(const std::string& what) {
    status = kExitViolation;
    status_text = "violation: " + what;
  }
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

class Params {
 public:
  explicit Params(const TaskSpec& t) : t_(t) {}

  const std::string& str(const std::string& key) {
    used_.insert(key);
    auto it = t_.params.find(key);
    if (it == t_.params.end()) throw ParseError(t_.line, "task '" + t_.kind + "' needs " + key + "=");
    return it->second;
  }
  std::optional<std::string> opt(const std::string& key) {
    used_.insert(key);
    auto it = t_.params.find(key);
    if (it == t_.params.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size(const std::string& key) { return to_size(key, str(key)); }
  std::size_t size(const std::string& key, std::size_t def) {
    auto v = opt(key);
    return v ? to_size(key, *v) : def;
  }
  Rational rational(const std::string& key) {
    try {
      return parse_rational(str(key));
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError(t_.line, key + " must be a rational, got '" + t_.params.at(key) + "'");
    }
  }
  EvalMode mode(const std::string& key, EvalMode def) {
    auto v = opt(key);
    if (!v) return def;
    try {
      return parse_mode(*v);
    } catch (const Error& e) {
      throw ParseError(t_.line, e.what());
    }
  }
  void finish() const {
    for (const auto& [k, v] : t_.params)
      if (!used_.count(k)) throw ParseError(t_.line, "task '" + t_.kind + "' does not take " + k + "=");
  }
  std::size_t line() const { return t_.line; }

 private:
  std::size_t to_size(const std::string& key, const std::string& v) const {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9)
      throw ParseError(t_.line, key + " must be a small non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(std::stoul(v));
  }

  const TaskSpec& t_;
  std::set<std::string> used_;
};

struct Workspace {
  std::map<std::string, Circuit> circuits;
  std::map<std::string, Generator> generators;

  const Circuit& circuit(const std::string& name, std::size_t line) const {
    auto it = circuits.find(name);
    if (it == circuits.end()) throw ParseError(line, "unknown circuit '" + name + "'");
    return it->second;
  }
  const Generator& generator(const std::string& name, std::size_t line) const {
    auto it = generators.find(name);
    if (it == generators.end()) throw ParseError(line, "unknown generator '" + name + "'");
    return it->second;
  }
  Adversary adversary(Params& p, const std::string& key, const std::string& mode_key, EvalMode def) const {
    const Circuit& c = circuit(p.str(key), p.line());
    return Adversary{c, p.mode(mode_key, def)};
  }
  void add_generator(const Generator& g, std::size_t line) {
    if (!generators.emplace(g.label(), g).second)
      throw ParseError(line, "generator '" + g.label() + "' already defined");
  }
};

struct Context {
  Workspace& ws;
  std::uint64_t seed;
};

void write_break(Section& s, const BreakReport& r) {
  s.add("kind", std::string(to_string(r.kind)));
  s.add("generator", r.generator);
  s.add("adversary", r.adversary);
  s.add("advantage", to_string(r.advantage));
  s.add("p_random", to_string(r.p_random));
  s.add("p_image", to_string(r.p_image));
  s.add("zero_on_image", yes_no(r.zero_on_image));
  s.add("is_break", yes_no(r.is_break));
  s.add("s_witness", r.s_witness ? r.s_witness->str() : "-");
  s.add("adversary_size", std::to_string(r.adversary_size));
  s.add("size_within_s", yes_no(r.size_within_s));
  s.rows.push_back({std::string(to_string(r.kind)), r.generator, r.adversary, r.advantage,
                    yes_no(r.zero_on_image), r.s_witness ? r.s_witness->str() : "", yes_no(r.is_break), ""});
}

void write_netlist(Section& s, const Adversary& a) {
  s.add("emitted", a.name() + " " + std::string(to_string(a.mode)));
  std::istringstream in(to_netlist(a.circuit));
  for (std::string line; std::getline(in, line);) s.lines.push_back("  " + line);
}

void write_trace(Section& s, const HybridTrace& t) {
  std::string pts, gaps;
  for (const auto& p : t.points) pts += " " + to_string(p);
  for (const auto& g : t.gaps) gaps += " " + to_string(g);
  s.lines.push_back("trace points" + pts);
  s.lines.push_back("trace gaps" + gaps);
  s.add("trace i_star", std::to_string(t.i_star));
  s.add("trace threshold", to_string(t.threshold));
  if (t.suffix) s.add("trace suffix", t.suffix->str().empty() ? "-" : t.suffix->str());
  s.add("trace telescopes", yes_no(t.telescopes()));
}

void write_cert(Section& s, const ReductionCertificate& c, const std::string& generator) {
  s.add("construction", c.construction);
  s.add("input", c.input_adversary);
  std::size_t k = 0;
  for (const auto& cl : c.clauses) {
    ++k;
    s.add("clause " + std::to_string(k), cl.holds() ? "holds" : "FAILS");
    s.add("  contract", cl.contract);
    s.add("  lhs", to_string(cl.lhs));
    s.add("  rhs", to_string(cl.rhs));
    s.rows.push_back({c.construction, generator, c.input_adversary, cl.lhs, "", "", yes_no(cl.holds()),
                      cl.contract + " ; rhs " + to_string(cl.rhs)});
  }
  for (const auto& [key, value] : c.notes) s.add("note " + key, value.empty() ? "-" : value);
  if (c.trace) write_trace(s, *c.trace);
  bool crosscheck = true;
  for (const auto& e : c.emitted) {
    write_netlist(s, e);
    crosscheck = crosscheck && parse_circuit(to_netlist(e.circuit)) == e.circuit;
  }
  s.add("crosscheck", crosscheck ? "ok" : "MISMATCH");
  s.add("certificate", c.holds() ? "holds" : "FAILS");
  if (!crosscheck) s.violation("emitted netlist does not round-trip");
  if (!c.holds()) {
    for (const auto& cl : c.clauses)
      if (!cl.holds()) {
        s.violation(c.construction + ": " + cl.contract);
        break;
      }
  }
}

// --- measurement tasks -----------------------------------------------------

void task_advantage(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  const std::string measure = p.opt("measure").value_or("super");
  p.finish();
  if (measure == "super") {
    write_break(s, super_advantage_report(d, g));
  } else if (measure == "std") {
    const Rational a = std_advantage(d, g);
    s.add("kind", "StdAdvantage");
    s.add("generator", g.label());
    s.add("adversary", d.name());
    s.add("advantage", to_string(a));
    s.rows.push_back({"StdAdvantage", g.label(), d.name(), a, "", a > 0 ? ceil(1 / a).str() : "", "", ""});
  } else {
    throw ParseError(p.line(), "measure must be super or std");
  }
}

void task_demi_break(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  write_break(s, demi_break(d, g));
}

void task_hsg(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  const Rational threshold =
      p.opt("threshold") ? p.rational("threshold") : Rational(1, static_cast<long long>(g.l()));
  p.finish();
  const HsgResult r = hsg_check(g, d, threshold);
  const Rational density = accept_random(d);
  s.add("generator", g.label());
  s.add("adversary", d.name());
  s.add("threshold", to_string(threshold));
  s.add("density", to_string(density));
  s.add("result", std::string(to_string(r)));
  s.rows.push_back({"HSGMiss", g.label(), d.name(), density, yes_no(r == HsgResult::Miss), "",
                    yes_no(r == HsgResult::Miss), std::string(to_string(r))});
}

void task_predict(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", EvalMode::FuncComputing);
  const std::size_t i = p.size("index");
  const std::string tot = p.opt("totality").value_or("require");
  p.finish();
  if (tot != "require" && tot != "bot") throw ParseError(p.line(), "totality must be require or bot");
  const Prob success = predictor_success(a, g, i, tot == "bot" ? Totality::TreatAsBot : Totality::Require);
  s.add("generator", g.label());
  s.add("adversary", a.name());
  s.add("index", std::to_string(i));
  s.add("success", to_string(success));
  s.rows.push_back({"predict", g.label(), a.name(), success.value(), "", "", yes_no(success.value() > Rational(1, 2)),
                    "index " + std::to_string(i)});
}

void task_supercore_terms(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a1 = cx.ws.adversary(p, "a1", "mode1", EvalMode::Nondet);
  const Adversary a2 = cx.ws.adversary(p, "a2", "mode2", EvalMode::CoNondet);
  std::optional<Rational> inv_p;
  if (p.opt("inv_p")) inv_p = p.rational("inv_p");
  p.finish();
  const auto [f, b] = split_last(g);
  const SuperCoreTerms t = super_core_terms(a1, a2, f, b, inv_p);
  s.add("generator", g.label());
  s.add("t1", to_string(t.t1));
  s.add("t2", to_string(t.t2));
  s.add("t3", to_string(t.t3));
  s.add("t4", to_string(t.t4));
  s.add("sum", to_string(t.sum()));
  if (t.star) s.add("star", yes_no(*t.star));
  if (t.diamond) s.add("diamond", yes_no(*t.diamond));
  s.rows.push_back({"supercore_terms", g.label(), a1.name() + "|" + a2.name(), t.sum(), "", "", "", ""});
}

// --- generator construction ------------------------------------------------

void task_stretch(Context& cx, Params& p, Section& s) {
  const Generator& b = cx.ws.generator(p.str("base"), p.line());
  const auto params = StretchParams::make(p.size("N"), p.rational("c"));
  const auto as = p.opt("as");
  p.finish();
  Generator g = stretch(b, params);
  if (as) g = Generator::from_table(*as, g.table());
  s.add("generator", g.label());
  s.add("N", std::to_string(params.N));
  s.add("m", std::to_string(params.m));
  s.add("n", std::to_string(params.n));
  s.add("rem", std::to_string(params.rem));
  s.add("l", std::to_string(g.l()));
  s.add("image_size", std::to_string(image(g).size()));
  cx.ws.add_generator(g, p.line());
}

void task_gmc(Context& cx, Params& p, Section& s) {
  const Circuit& c = cx.ws.circuit(p.str("predicate"), p.line());
  const std::size_t m = p.size("m");
  const auto as = p.opt("as");
  p.finish();
  Generator g = gmc(m, c);
  if (as) g = Generator::from_table(*as, g.table());
  s.add("generator", g.label());
  s.add("n", std::to_string(g.n()));
  s.add("l", std::to_string(g.l()));
  cx.ws.add_generator(g, p.line());
}

// --- reductions ------------------------------------------------------------

void reduce_stretch(Context& cx, Params& p, Section& s) {
  const Generator& b = cx.ws.generator(p.str("base"), p.line());
  const auto params = StretchParams::make(p.size("N"), p.rational("c"));
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  const auto r = stretch_reduction(d, b, params);
  write_cert(s, r.cert, b.label());
}

std::vector<Generator> family_of(Context& cx, Params& p) {
  std::vector<Generator> fam;
  for (const auto& name : detail::split(p.str("family"), ',')) fam.push_back(cx.ws.generator(name, p.line()));
  return fam;
}

void reduce_io(Context& cx, Params& p, Section& s) {
  const auto fam = family_of(cx, p);
  const std::size_t n = p.size("n");
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  std::optional<BigInt> sv;
  if (auto v = p.opt("s")) sv = BigInt(p.size("s"));
  p.finish();
  const auto r = io_reduction(d, fam, n, sv);
  write_cert(s, r.cert, fam[r.source_index].label());
}

void reduce_cap_distinguisher(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", EvalMode::FuncComputing);
  const std::size_t i = p.size("index");
  p.finish();
  write_cert(s, cap_predictor_to_distinguisher(a, g, i).cert, g.label());
}

void reduce_cup_predictors(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  write_cert(s, distinguisher_to_cup_predictors(d, g).cert, g.label());
}

void reduce_cap_to_both(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", EvalMode::FuncComputing);
  const std::size_t i = p.size("index");
  p.finish();
  write_cert(s, cap_to_both(a, g, i).cert, g.label());
}

void reduce_supercore_attack(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  const auto [f, b] = split_last(g);
  write_cert(s, supercore_attack_from_distinguisher(d, f, b).cert, g.label());
}

void reduce_supercore_distinguisher(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const std::string side = p.opt("side").value_or("star");
  if (side != "star" && side != "diamond") throw ParseError(p.line(), "side must be star or diamond");
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", side == "star" ? EvalMode::Nondet : EvalMode::CoNondet);
  p.finish();
  const auto [f, b] = split_last(g);
  write_cert(s,
             distinguisher_from_supercore_attack(a, f, b, side == "star" ? SupercoreSide::Star : SupercoreSide::Diamond)
                 .cert,
             g.label());
}

void reduce_hardbit(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  const auto [f, b] = split_last(g);
  write_cert(s, distinguisher_from_hardbit_predictor(a, f, b).cert, g.label());
}

void reduce_injective(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  p.finish();
  const auto [f, b] = split_last(g);
  const auto r = injective_attack(f, b);
  s.add("type1", std::to_string(r.type1_count));
  s.add("above_threshold", yes_no(r.above_threshold));
  write_cert(s, r.cert, g.label());
}

void reduce_supercore_hardcore(Context& cx, Params& p, Section& s) {
  const Generator& g = cx.ws.generator(p.str("generator"), p.line());
  const Adversary a = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  p.finish();
  const auto [f, b] = split_last(g);
  write_cert(s, supercore_implies_hardcore_check(f, b, a), g.label());
}

// --- learner and sweeps ----------------------------------------------------

void task_learn(Context& cx, Params& p, Section& s) {
  const Circuit& c = cx.ws.circuit(p.str("target"), p.line());
  const Adversary d = cx.ws.adversary(p, "adversary", "mode", EvalMode::Det);
  const std::size_t m = p.size("m");
  const std::string mode_name = p.opt("sampling").value_or("exhaustive");
  const std::size_t samples = p.size("samples", 0);
  std::optional<BigInt> sv;
  if (p.opt("s")) sv = BigInt(p.size("s"));
  p.finish();
  LearnMode mode;
  if (mode_name == "sampled") {
    mode = LearnMode::sampled(samples, cx.seed);
  } else if (mode_name != "exhaustive") {
    throw ParseError(p.line(), "sampling must be exhaustive or sampled");
  }
  if (!sv) {
    const Rational adv = super_advantage(d, gmc(m, c));
    if (adv <= 0) throw PreconditionError("'" + d.name() + "' has no advantage on gmc(" + std::to_string(m) + ")");
    sv = ceil(1 / adv);
  }
  const LearnOutcome out = verify_learning_bound(d, c, m, *sv, mode);
  const std::string gen = "gmc(" + std::to_string(m) + "," + c.name() + ")";
  s.add("generator", gen);
  s.add("adversary", d.name());
  s.add("mode", mode_name);
  if (mode.kind == LearnMode::Kind::Sampled) s.add("sample_seed", std::to_string(mode.seed));
  s.add("advantage", to_string(out.advantage));
  s.add("s", out.s.str());
  s.add("accuracy_bar", to_string(out.accuracy_bar));
  for (const auto& r : out.runs) {
    std::string xs;
    for (const auto& x : r.x_blocks) xs += (xs.empty() ? "" : ",") + x.str();
    if (xs.empty()) xs = "-";
    s.lines.push_back("run i=" + std::to_string(r.i) + " r=" + r.r.str() + " x=" + xs +
                      " accuracy=" + to_string(r.accuracy) + " meets=" + yes_no(r.meets));
    s.rows.push_back({"learn_run", gen, d.name(), r.accuracy, "", "", yes_no(r.meets),
                      "i=" + std::to_string(r.i) + " r=" + r.r.str() + " x=" + xs});
  }
  s.add("confidence", to_string(out.confidence) + (mode.kind == LearnMode::Kind::Sampled ? " (estimate)" : ""));
  s.add("statement_bound", to_string(out.statement_bound));
  s.add("proof_bound", to_string(out.proof_bound));
  s.add("meets_statement_bound", yes_no(out.meets_statement));
  s.add("meets_proof_bound", yes_no(out.meets_proof));
  write_trace(s, out.trace);
  if (mode.kind == LearnMode::Kind::Exhaustive) {
    for (std::size_t i = 0; i < out.mean_accuracy.size(); ++i)
      s.add("mean_accuracy i=" + std::to_string(i + 1),
            to_string(out.mean_accuracy[i]) + " predicted " + to_string(out.predicted_accuracy[i]));
    s.add("identity", yes_no(out.identity_holds()));
  }
  s.rows.push_back({"learn_summary", gen, d.name(), out.confidence, "", out.s.str(), yes_no(out.meets_statement),
                    "statement " + to_string(out.statement_bound) + " proof " + to_string(out.proof_bound) +
                        " meets_proof " + yes_no(out.meets_proof)});
  if (!out.trace.telescopes()) s.violation("learner hybrid gaps do not telescope");
  if (mode.kind == LearnMode::Kind::Exhaustive && !out.identity_holds())
    s.violation("mean accuracy differs from 1/2 + P[p_i=1] - P[p_{i+1}=1]");
  if (mode.kind == LearnMode::Kind::Exhaustive && !out.meets_statement)
    s.violation("confidence below 1/(2 m^2 s)");
}

void task_stretch_sweep(Context& cx, Params& p, Section& s) {
  StretchSweepOptions o;
  if (auto v = p.opt("base_n")) {
    o.base_n.clear();
    for (const auto& x : detail::split(*v, ',')) {
      if (x != "1" && x != "2" && x != "3") throw ParseError(p.line(), "base_n entries must be 1, 2 or 3");
      o.base_n.push_back(static_cast<std::size_t>(std::stoul(x)));
    }
  }
  o.max_N = p.size("max_N", o.max_N);
  o.max_subset_len = p.size("max_subset_len", o.max_subset_len);
  o.exhaustive_complement = p.size("exhaustive_complement", o.exhaustive_complement);
  o.random_subsets = p.size("random_subsets", o.random_subsets);
  o.random_circuits = p.size("random_circuits", o.random_circuits);
  o.max_witness = p.size("max_witness", o.max_witness);
  const bool verbose = p.opt("rows").value_or("yes") == "yes";
  p.finish();
  if (o.exhaustive_complement > 20) throw ParseError(p.line(), "exhaustive_complement is limited to 20");
  o.seed = cx.seed;
  const StretchSweepResult r = stretch_sweep(o);
  s.add("sweep_seed", std::to_string(o.seed));
  for (const auto& row : r.rows) {
    const std::string layout = "N=" + std::to_string(row.layout.N) + " m=" + std::to_string(row.layout.m) +
                               " n=" + std::to_string(row.layout.n) + " rem=" + std::to_string(row.layout.rem);
    if (verbose)
      s.lines.push_back("row " + row.base + " " + layout + " subsets=" + std::to_string(row.subsets) +
                        (row.exhaustive ? " (all)" : "") + " circuits=" + std::to_string(row.circuits) +
                        " failures=" + std::to_string(row.failures) + " min_margin=" + to_string(row.min_margin));
    s.rows.push_back({"stretch_sweep", row.base + " " + layout, std::to_string(row.subsets + row.circuits) + " adversaries",
                      row.min_margin, "", "", yes_no(row.failures == 0 && row.telescoping_failures == 0), ""});
  }
  s.add("configurations", std::to_string(r.rows.size()));
  s.add("adversaries", std::to_string(r.adversaries));
  s.add("random_circuits", std::to_string(r.circuits));
  s.add("failures", std::to_string(r.failures));
  s.add("telescoping_failures", std::to_string(r.telescoping_failures));
  for (const auto& f : r.failure_detail) s.add("failure", f);
  if (!r.ok()) s.violation("stretch reduction sweep found " + std::to_string(r.failures) + " failures");
}

using TaskFn = std::function<void(Context&, Params&, Section&)>;

const std::map<std::string, TaskFn>& task_table() {
  static const std::map<std::string, TaskFn> table = {
      {"advantage", task_advantage},
      {"demi_break", task_demi_break},
      {"hsg", task_hsg},
      {"predict", task_predict},
      {"supercore_terms", task_supercore_terms},
      {"stretch", task_stretch},
      {"gmc", task_gmc},
      {"learn", task_learn},
      {"stretch_sweep", task_stretch_sweep},
      {"reduce:stretch", reduce_stretch},
      {"reduce:io", reduce_io},
      {"reduce:cap_distinguisher", reduce_cap_distinguisher},
      {"reduce:cup_predictors", reduce_cup_predictors},
      {"reduce:cap_to_both", reduce_cap_to_both},
      {"reduce:supercore_attack", reduce_supercore_attack},
      {"reduce:supercore_distinguisher", reduce_supercore_distinguisher},
      {"reduce:hardbit", reduce_hardbit},
      {"reduce:injective", reduce_injective},
      {"reduce:supercore_hardcore", reduce_supercore_hardcore},
  };
  return table;
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void load_inputs(const ExperimentConfig& cfg, Workspace& ws) {
  for (const auto& rel : cfg.inputs) {
    const std::filesystem::path path = cfg.base_dir / rel;
    const std::string text = read_file(path);
    try {
      const auto lines = detail::logical_lines(text);
      if (lines.empty()) throw ParseError(1, "empty input file");
      const auto first = detail::split_ws(lines.front().second);
      if (first[0] == "circuit") {
        Circuit c = parse_circuit(text);
        const std::string name = c.name();
        if (!ws.circuits.emplace(name, std::move(c)).second)
          throw ParseError(lines.front().first, "circuit '" + name + "' already defined");
      } else if (first[0] == "generator") {
        Generator g = parse_generator(text, [&](std::string_view name) -> const Circuit* {
          auto it = ws.circuits.find(std::string(name));
          return it == ws.circuits.end() ? nullptr : &it->second;
        });
        ws.add_generator(g, lines.front().first);
      } else {
        throw ParseError(lines.front().first, "expected 'circuit' or 'generator'");
      }
    } catch (const Error& e) {
      throw Error(rel + ": " + e.what());
    }
  }
}

std::uint64_t task_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  return rng();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class CapGuard {
 public:
  explicit CapGuard(unsigned bits) : saved_(enumeration_cap()) { set_enumeration_cap(bits); }
  ~CapGuard() { set_enumeration_cap(saved_); }
  CapGuard(const CapGuard&) = delete;
  CapGuard& operator=(const CapGuard&) = delete;

 private:
  unsigned saved_;
};

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  const std::uint64_t seed = options.seed.value_or(config.seed);
  const std::size_t cap = options.cap.value_or(config.cap);
  const std::string header = "# demibit report " + options.timestamp.value_or(now_utc());
  std::ostringstream out;
  out << header << "\n";
  if (options.format == OutputFormat::Report)
    out << "# seed=" << seed << " cap=" << cap << " tasks=" << config.tasks.size() << "\n";
  else
    out << "kind,generator,adversary,advantage_num,advantage_den,zero_on_image,s_witness,holds,detail\n";

  RunResult result;
  CapGuard guard(static_cast<unsigned>(cap));
  Workspace ws;
  try {
    for (const auto& t : config.tasks)
      if (!task_table().count(t.kind)) throw ParseError(t.line, "unknown task kind '" + t.kind + "'");
    load_inputs(config, ws);
  } catch (const Error& e) {
    if (options.format == OutputFormat::Report) out << "error " << e.what() << "\n";
    else out << "error,,,,,,,no," << csv_field(e.what()) << "\n";
    result.exit_code = kExitInput;
    result.output = out.str();
    return result;
  }

  for (std::size_t k = 0; k < config.tasks.size(); ++k) {
    const TaskSpec& t = config.tasks[k];
    Section s;
    Context cx{ws, task_seed(seed, k)};
    Params p(t);
    auto fail = [&](int code, const std::string& label, const std::string& what) {
      s.status = code;
      s.status_text = label + ": " + what;
      s.rows.push_back({t.kind, "", "", std::nullopt, "", "", "no", s.status_text});
    };
    try {
      task_table().at(t.kind)(cx, p, s);
    } catch (const CapExceeded& e) {
      fail(kExitCap, "cap exceeded", e.what());
    } catch (const InternalConsistencyError& e) {
      fail(kExitViolation, "violation", e.what());
    } catch (const ParseError& e) {
      fail(kExitInput, "error (config)", e.what());
    } catch (const PreconditionError& e) {
      fail(kExitInput, "error (precondition)", e.what());
    } catch (const Error& e) {
      fail(kExitInput, "error", e.what());
    } catch (const std::exception& e) {
      fail(kExitViolation, "internal error", e.what());
    }
    result.exit_code = worse(result.exit_code, s.status);
    if (options.format == OutputFormat::Report) {
      out << "\n== task " << (k + 1) << ": " << t.kind << " (line " << t.line << ")\n";
      for (const auto& line : s.lines) out << line << "\n";
      out << "status " << s.status_text << "\n";
    } else {
      for (const auto& r : s.rows) {
        out << csv_field(r.kind) << ',' << csv_field(r.generator) << ',' << csv_field(r.adversary) << ',';
        if (r.advantage) out << numerator(*r.advantage).str() << ',' << denominator(*r.advantage).str();
        else out << ',';
        out << ',' << r.zero_on_image << ',' << r.s_witness << ',' << r.holds << ',' << csv_field(r.detail) << "\n";
      }
    }
  }
  result.output = out.str();
  return result;
}

}  // namespace demibit::cli
