// dave: batch front end. Every subcommand writes
// out/<command>/<config-hash>/{config.echo, report.json, data files}.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dave/dave.hpp"

using namespace dave;
namespace fs = std::filesystem;

namespace {

// All subcommand parameters are kept as strings so that config files, echo
// files and hashing see exactly what the user wrote.
struct command {
  std::string name;
  CLI::App* app = nullptr;
  std::vector<std::pair<std::string, std::string*>> params;
  std::vector<std::pair<std::string, bool*>> flags;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;

  void param(const std::string& key, std::string def, const std::string& help) {
    values[key] = std::move(def);
    params.emplace_back(key, &values[key]);
    app->add_option("--" + key, values[key], help)->capture_default_str();
  }
  void flag(const std::string& key, const std::string& help) {
    switches[key] = false;
    flags.emplace_back(key, &switches[key]);
    app->add_flag("--" + key, switches[key], help);
  }
  const std::string& get(const std::string& key) const { return values.at(key); }
  bool on(const std::string& key) const { return switches.at(key); }

  std::string echo() const {
    std::string out;
    for (const auto& [k, v] : params) out += k + "=" + *v + "\n";
    for (const auto& [k, v] : flags) out += k + "=" + (*v ? "true" : "false") + "\n";
    return out;
  }
};

struct common_opts {
  std::string out = "out";
  std::string config;
  bool no_timestamp = false;
  unsigned jobs = default_jobs();
};

[[noreturn]] void config_fail(const std::string& msg) { throw error(errc::config_error, msg); }

std::uint64_t u64(const std::string& s, const std::string& what) { return parse_u64(s, what); }

std::uint32_t u32(const std::string& s, const std::string& what) {
  auto v = u64(s, what);
  if (v > 0xffffffffull) config_fail(what + " out of range");
  return static_cast<std::uint32_t>(v);
}

double real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    config_fail("bad number for " + what + ": '" + s + "'");
  }
}

// "2^4" or "16".
std::uint64_t count_value(std::string s, const std::string& what) {
  s = trim(s);
  auto caret = s.find('^');
  if (caret == std::string::npos) return u64(s, what);
  auto base = u64(s.substr(0, caret), what), e = u64(s.substr(caret + 1), what);
  if (e > 62) config_fail(what + " exponent too large");
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < e; ++i) v *= base;
  return v;
}

// Comma list; "none" or "" is empty.
std::vector<std::uint64_t> count_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  if (trim(s) == "none") return out;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (!trim(tok).empty()) out.push_back(count_value(tok, what));
  }
  return out;
}

// "2..40" or a comma list.
std::vector<std::uint64_t> range_list(const std::string& s, const std::string& what) {
  auto dots = s.find("..");
  if (dots == std::string::npos) return count_list(s, what);
  auto lo = count_value(s.substr(0, dots), what), hi = count_value(s.substr(dots + 2), what);
  std::vector<std::uint64_t> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

dispute_mode parse_mode(const std::string& s) {
  if (s == "discrete") return dispute_mode::discrete;
  if (s == "continuous") return dispute_mode::continuous;
  config_fail("mode must be discrete or continuous");
}

bond_policy parse_bond(const std::string& s) {
  if (s == "nearest") return bond_policy::nearest;
  if (s == "ceil") return bond_policy::ceil;
  config_fail("bond-policy must be nearest or ceil");
}


std::string now_utc() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct output {
  fs::path dir;
  json report;

  output(const command& c, const common_opts& o) {
    auto echo = c.echo();
    std::string keyed = c.name + "\n" + echo;
    auto h = sha256(std::span(reinterpret_cast<const std::uint8_t*>(keyed.data()), keyed.size()));
    dir = fs::path(o.out) / c.name / to_hex(h).substr(0, 12);
    fs::create_directories(dir);
    write("config.echo", echo);
    report["command"] = c.name;
    json cfg = json::object();
    for (const auto& [k, v] : c.params) cfg[k] = *v;
    for (const auto& [k, v] : c.flags) cfg[k] = *v;
    report["config"] = cfg;
    report["metadata"] = metadata();
    if (!o.no_timestamp) report["metadata"]["generated_at"] = now_utc();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << text;
  }

  void finish() const {
    write("report.json", report.dump(2) + "\n");
    std::cout << (dir / "report.json").string() << "\n";
  }
};

time_params params_from(const command& c) {
  seconds t_c = parse_duration(c.get("censorship-budget"));
  seconds t_m = parse_duration(c.get("match-duration"));
  auto G = u32(c.get("group-size"), "group-size");
  auto B = static_cast<unsigned>(u32(c.get("tree-height"), "tree-height"));
  seconds t_g = 0;
  if (!c.get("max-demotions").empty()) {
    auto K = u64(c.get("max-demotions"), "max-demotions");
    if (K == 0 || t_c % K != 0) throw error(errc::non_divisible_grace, "max-demotions must divide the budget");
    t_g = t_c / K;
  } else {
    t_g = parse_duration(c.get("grace-period"));
  }
  return make_params(t_c, t_m, t_g, G, B);
}

// ---------------------------------------------------------------------------

int run_simulate(const command& c, const common_opts& o) {
  dispute_config cfg;
  cfg.params = params_from(c);
  cfg.mode = parse_mode(c.get("mode"));
  cfg.censorship = parse_censorship_policy(c.get("policy"));
  cfg.censorship_seed = u64(c.get("censorship-seed"), "censorship-seed");
  cfg.censorship_probability = real(c.get("censorship-probability"), "censorship-probability");
  if (!(cfg.censorship_probability >= 0 && cfg.censorship_probability <= 1)) {
    config_fail("censorship-probability must be in [0,1]");
  }
  if (!c.get("behavior-seed").empty()) cfg.random_behavior_seed = u64(c.get("behavior-seed"), "behavior-seed");
  auto N = count_value(c.get("claims"), "claims");
  auto cs = make_claim_set(N, cfg.params.tree_height, u64(c.get("seed"), "seed"));

  output out(c, o);
  std::string transcript;
  auto res = run_dispute(cs, cfg, [&](const transcript_entry& e) { transcript += to_json(e).dump() + "\n"; });
  out.write("transcript.jsonl", transcript);
  out.report["result"] = to_json(res, !c.on("summary-only"));
  out.finish();
  std::cerr << "rounds=" << res.rounds << " winner=" << (res.winner ? std::to_string(*res.winner) : "none")
            << " honest_won=" << (res.honest_won ? "yes" : "no") << " violations=" << res.violations.size() << "\n";
  return res.honest_won && res.violations.empty() ? 0 : 1;
}

std::vector<economics_row> economics_rows(const command& c, unsigned jobs) {
  auto G = u32(c.get("economics-group-size"), "economics-group-size");
  auto K = u32(c.get("economics-max-demotions"), "economics-max-demotions");
  auto ns = count_list(c.get("economics-claims"), "economics-claims");
  double cm = real(c.get("match-cost"), "match-cost");
  auto pol = parse_bond(c.get("bond-policy"));
  seconds t_c = parse_duration(c.get("censorship-budget")), t_m = parse_duration(c.get("match-duration"));
  return parallel_map(ns, [&](std::uint64_t N) { return economics(G, K, N, cm, pol, t_c, t_m); }, jobs);
}

std::string economics_csv_text(const std::vector<economics_row>& rows) {
  std::string s = std::string(economics_header) + "\n";
  for (const auto& r : rows) s += economics_csv(r) + "\n";
  return s;
}

json economics_json(const std::vector<economics_row>& rows) {
  json a = json::array();
  for (const auto& e : rows) {
    a.push_back({{"G", e.G},
                 {"K", e.K},
                 {"N", e.N},
                 {"R", e.R},
                 {"bond_target_ether", e.bond_target},
                 {"bond_ether", e.bond},
                 {"bond_policy", std::string(to_string(e.policy))},
                 {"hero_expenses_ether", e.hero_expenses},
                 {"adversary_loss_ether", e.adversary_loss},
                 {"delay_days", e.delay / 86400.0}});
  }
  return a;
}

int run_tables(const command& c, const common_opts& o) {
  seconds t_c = parse_duration(c.get("censorship-budget")), t_m = parse_duration(c.get("match-duration"));
  auto ns = count_list(c.get("claims"), "claims");
  auto gs = count_list(c.get("group-sizes"), "group-sizes");
  auto fixed_g = u32(c.get("fixed-group-size"), "fixed-group-size");
  auto fixed_k = u32(c.get("fixed-max-demotions"), "fixed-max-demotions");
  auto cont_gs = count_list(c.get("continuous-group-sizes"), "continuous-group-sizes");

  std::vector<std::pair<std::uint32_t, std::uint64_t>> opt_grid, cont_grid;
  for (auto g : gs) {
    for (auto n : ns) opt_grid.emplace_back(static_cast<std::uint32_t>(g), n);
  }
  for (auto g : cont_gs) {
    for (auto n : ns) cont_grid.emplace_back(static_cast<std::uint32_t>(g), n);
  }
  auto opt = parallel_map(opt_grid, [&](const auto& p) { return optimize_grace(p.first, p.second, t_c, t_m); }, o.jobs);
  auto fixed = parallel_map(ns, [&](std::uint64_t n) {
    return fixed_schedule(fixed_g, fixed_k, n, t_c, t_m, dispute_mode::discrete);
  }, o.jobs);
  auto cont = parallel_map(cont_grid, [&](const auto& p) {
    return fixed_schedule(p.first, fixed_k, p.second, t_c, t_m, dispute_mode::continuous);
  }, o.jobs);

  output out(c, o);
  std::string a = std::string(schedule_opt_header) + "\n", b = std::string(schedule_fixed_header) + "\n",
              d = std::string(schedule_fixed_header) + "\n";
  for (const auto& r : opt) a += schedule_opt_csv(r) + "\n";
  for (const auto& r : fixed) b += schedule_fixed_csv(r) + "\n";
  for (const auto& r : cont) d += schedule_fixed_csv(r) + "\n";
  out.write("schedule_opt.csv", a);
  out.write("schedule_fixed.csv", b);
  out.write("continuous.csv", d);
  out.report["files"] = {"schedule_opt.csv", "schedule_fixed.csv", "continuous.csv"};
  out.report["rows"] = {{"schedule_opt", opt.size()}, {"schedule_fixed", fixed.size()}, {"continuous", cont.size()}};
  if (c.on("economics")) {
    auto rows = economics_rows(c, o.jobs);
    out.write("economics.csv", economics_csv_text(rows));
    out.report["files"].push_back("economics.csv");
    out.report["economics"] = economics_json(rows);
  }
  out.finish();
  return 0;
}

int run_economics(const command& c, const common_opts& o) {
  auto rows = economics_rows(c, o.jobs);
  output out(c, o);
  out.write("economics.csv", economics_csv_text(rows));
  out.report["economics"] = economics_json(rows);
  out.report["note"] = "bond_ether rounds bond_target_ether per bond_policy";
  out.finish();
  return 0;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> kg_grid(const command& c) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (auto g : count_list(c.get("group-sizes"), "group-sizes")) {
    for (auto k : range_list(c.get("max-demotions"), "max-demotions")) {
      out.emplace_back(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(g));
    }
  }
  return out;
}

int run_curve(const command& c, const common_opts& o) {
  auto max_n = count_value(c.get("max-claims"), "max-claims");
  auto grid = kg_grid(c);
  auto curves = parallel_map(grid, [&](const auto& p) { return delay_curve(p.first, p.second).breakpoints(max_n); },
                             o.jobs);
  output out(c, o);
  std::string csv = "K,G,N,R\n";
  json summary = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // D(1) = 0 starts every curve.
    csv += std::to_string(grid[i].first) + "," + std::to_string(grid[i].second) + ",1,0\n";
    for (const auto& p : curves[i]) {
      csv += std::to_string(p.K) + "," + std::to_string(p.G) + "," + std::to_string(p.N) + "," +
             std::to_string(p.rounds) + "\n";
    }
    summary.push_back({{"K", grid[i].first}, {"G", grid[i].second}, {"breakpoints", curves[i].size() + 1}});
  }
  out.write("delay_curve.csv", csv);
  out.report["curves"] = summary;
  out.finish();
  return 0;
}

int run_fit(const command& c, const common_opts& o) {
  auto max_n = count_value(c.get("max-claims"), "max-claims");
  auto grid = kg_grid(c);
  auto curves = parallel_map(grid, [&](const auto& p) { return delay_curve(p.first, p.second).breakpoints(max_n); },
                             o.jobs);
  output out(c, o);
  json fits = json::array();
  std::vector<delay_point> pooled;
  double worst_rms = 0, worst_max = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    pooled.insert(pooled.end(), curves[i].begin(), curves[i].end());
    json j{{"K", grid[i].first}, {"G", grid[i].second}};
    try {
      auto f = fit_bound(curves[i]);
      j["fit"] = to_json(f);
      worst_rms = std::max(worst_rms, f.rms);
      worst_max = std::max(worst_max, f.max_abs_err);
    } catch (const error& e) {
      j["error"] = e.what();
    }
    fits.push_back(j);
  }
  out.report["per_curve"] = fits;
  out.report["worst_rms"] = worst_rms;
  out.report["worst_max_abs_err"] = worst_max;
  try {
    out.report["pooled"] = to_json(fit_bound(pooled));
  } catch (const error& e) {
    out.report["pooled"] = {{"error", e.what()}};
  }
  out.finish();
  return 0;
}

int run_search(const command& c, const common_opts& o) {
  auto ks = range_list(c.get("max-demotions"), "max-demotions");
  auto gs = count_list(c.get("group-sizes"), "group-sizes");
  auto ns = range_list(c.get("claims"), "claims");
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint64_t>> grid;
  for (auto k : ks) {
    for (auto g : gs) {
      for (auto n : ns) grid.emplace_back(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(g), n);
    }
  }
  auto model = c.get("model") == "sybil-only" ? abstract_model::sybil_only : abstract_model::hero_pinned;
  if (c.get("model") != "sybil-only" && c.get("model") != "hero-pinned") config_fail("model must be hero-pinned or sybil-only");
  // Validate limits up front so an oversized grid is a usage error.
  search_limits lim;
  for (auto [K, G, N] : grid) {
    if (K > lim.max_k || N > lim.max_n || G > lim.max_g) {
      throw error(errc::search_space_too_large, "search limited to K<=7, N<=64, G<=3");
    }
  }
  auto rows = parallel_map(grid, [&](const auto& t) {
    auto [K, G, N] = t;
    auto ex = exhaustive_max_delay(K, G, N, model);
    return std::pair{ex, max_delay_rounds(K, G, N, model)};
  }, o.jobs);
  output out(c, o);
  json cases = json::array();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto [K, G, N] = grid[i];
    bool ok = rows[i].first.rounds == rows[i].second;
    mismatches += !ok;
    json j{{"K", K}, {"G", G}, {"N", N}, {"exhaustive", rows[i].first.rounds}, {"strategy", rows[i].second},
           {"match", ok}, {"distributions_visited", rows[i].first.distributions_visited}};
    if (c.on("witness")) j["witness"] = to_json(rows[i].first)["witness"];
    cases.push_back(j);
  }
  out.report["cases"] = cases;
  out.report["mismatches"] = mismatches;
  out.finish();
  std::cerr << grid.size() << " cases, " << mismatches << " mismatches\n";
  return mismatches == 0 ? 0 : 1;
}

int run_verify_bounds(const command& c, const common_opts& o) {
  auto max_n = count_value(c.get("max-claims"), "max-claims");
  auto grid = kg_grid(c);
  struct sweep {
    std::size_t points = 0, numerical = 0, settlement = 0;
  };
  auto sweeps = parallel_map(grid, [&](const auto& p) {
    sweep s;
    for (const auto& q : delay_curve(p.first, p.second).breakpoints(max_n)) {
      ++s.points;
      double d = static_cast<double>(q.rounds);
      if (!(d < numerical_bound(q.K, q.G, q.N))) ++s.numerical;
      if (!(d < settlement_bound(q.K, q.G, q.N))) ++s.settlement;
    }
    return s;
  }, o.jobs);

  std::size_t rounds = 0, rec = 0, ramp = 0, jramp = 0;
  auto aks = range_list(c.get("round-max-demotions"), "round-max-demotions");
  auto ags = count_list(c.get("round-group-sizes"), "round-group-sizes");
  auto ans = range_list(c.get("round-claims"), "round-claims");
  for (auto K : aks) {
    for (auto G : ags) {
      for (auto N : ans) {
        auto k = static_cast<std::uint32_t>(K);
        auto g = static_cast<std::uint32_t>(G);
        auto t = max_delay_trace(k, g, N);
        for (std::size_t j = 0; j < t.size(); ++j) {
          if (j + 1 < t.size()) {
            ++rounds;
            rec += !recurrence_check(t[j], t[j + 1], g);
          }
          ramp += !ramp_bound_check(t[j], N, j, g);
        }
        if (N >= 2) jramp += !under_ramp(t[std::min<std::size_t>(j_threshold(k, g, N), t.size() - 1)]);
      }
    }
  }

  output out(c, o);
  json per = json::array();
  std::size_t bad = rec + ramp + jramp;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    per.push_back({{"K", grid[i].first}, {"G", grid[i].second}, {"breakpoints", sweeps[i].points},
                   {"numerical_bound_violations", sweeps[i].numerical},
                   {"settlement_bound_violations", sweeps[i].settlement}});
    bad += sweeps[i].numerical + sweeps[i].settlement;
  }
  out.report["bound_sweeps"] = per;
  out.report["per_round"] = {{"rounds", rounds},
                            {"recurrence_violations", rec},
                            {"ramp_violations", ramp},
                            {"j_threshold_ramp_violations", jramp}};
  out.report["violations"] = bad;
  out.finish();
  std::cerr << bad << " violations\n";
  return bad == 0 ? 0 : 1;
}

// --config FILE: its key=value lines become --key=value arguments placed
// right after the subcommand, so explicit flags still win.
std::vector<std::string> expand_config(const std::vector<std::string>& argv,
                                       const std::map<std::string, command*>& cmds) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--config" && i + 1 < argv.size()) {
      path = argv[++i];
    } else if (argv[i].rfind("--config=", 0) == 0) {
      path = argv[i].substr(9);
    } else {
      rest.push_back(argv[i]);
    }
  }
  if (!path) return argv;
  std::ifstream in(*path);
  if (!in) config_fail("cannot read config file " + *path);
  auto kv = parse_key_values(in);
  std::size_t sub = 1;
  while (sub < rest.size() && !cmds.count(rest[sub])) ++sub;
  if (sub == rest.size()) config_fail("--config needs a subcommand");
  const command& c = *cmds.at(rest[sub]);
  std::set<std::string> known;
  for (const auto& [k, v] : c.params) known.insert(k);
  for (const auto& [k, v] : c.flags) known.insert(k);
  reject_unknown_keys(kv, known);
  std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(sub) + 1);
  for (const auto& [k, v] : kv) {
    if (c.switches.count(k)) {
      if (v == "true" || v == "1") out.push_back("--" + k);
      else if (v != "false" && v != "0") config_fail("flag " + k + " must be true or false");
    } else {
      out.push_back("--" + k + "=" + v);
    }
  }
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(sub) + 1, rest.end());
  return out;
}

void time_options(command& c) {
  c.param("censorship-budget", "1w", "T_c, the censorship budget (s/m/h/d/w suffixes)");
  c.param("match-duration", "2h", "T_m, total match time for both sides");
}

void kg_options(command& c, std::string ks, std::string gs, std::string max_n) {
  c.param("max-demotions", std::move(ks), "K values: list or range like 2..40");
  c.param("group-sizes", std::move(gs), "G values, comma separated");
  c.param("max-claims", std::move(max_n), "largest N considered, e.g. 2^24");
}

void economics_options(command& c) {
  c.param("economics-group-size", "4", "G for the economics rows");
  c.param("economics-max-demotions", "21", "K for the economics rows");
  c.param("economics-claims", "2,2^20", "N values for the economics rows");
  c.param("match-cost", "0.05", "C_m, ether per match");
  c.param("bond-policy", "nearest", "nearest or ceil");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dave dispute simulator and analysis toolkit"};
  app.require_subcommand(1);
  common_opts common;
  app.add_option("--out", common.out, "output root")->capture_default_str();
  app.add_option("--config", common.config, "key=value file for the subcommand's options");
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp from report.json");
  app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::unique_ptr<command>> owned;
  std::map<std::string, command*> cmds;
  auto add = [&](const std::string& name, const std::string& desc) -> command& {
    auto c = std::make_unique<command>();
    c->name = name;
    c->app = app.add_subcommand(name, desc);
    cmds[name] = c.get();
    owned.push_back(std::move(c));
    return *owned.back();
  };

  auto& sim = add("simulate", "run one full dispute");
  sim.param("claims", "8", "N, number of claims (claim 0 is honest)");
  time_options(sim);
  sim.param("grace-period", "8h", "T_g; ignored when max-demotions is set");
  sim.param("max-demotions", "", "K; sets T_g = T_c / K");
  sim.param("group-size", "2", "G");
  sim.param("tree-height", "4", "B, computation length 2^B");
  sim.param("mode", "discrete", "discrete or continuous");
  sim.param("policy", "none", "censorship: none, all_at_once, bursts, random_spans");
  sim.param("seed", "1", "seed for the computation and the Sybil histories");
  sim.param("censorship-seed", "0", "seed for the censorship schedule");
  sim.param("censorship-probability", "1", "chance a round is censored (bursts, random_spans)");
  sim.param("behavior-seed", "", "if set, Sybils draw random match behaviors");
  sim.flag("summary-only", "leave per-round reports out of report.json");

  auto& tab = add("tables", "grace-period schedules as CSV");
  time_options(tab);
  tab.param("claims", "2^4,2^8,2^12,2^16", "N values");
  tab.param("group-sizes", "2,4,8", "G values for schedule_opt.csv");
  tab.param("fixed-group-size", "4", "G for schedule_fixed.csv");
  tab.param("fixed-max-demotions", "21", "K for schedule_fixed.csv and continuous.csv");
  tab.param("continuous-group-sizes", "2,4", "G values for continuous.csv");
  tab.flag("economics", "also write economics.csv");
  economics_options(tab);

  auto& cur = add("curve", "breakpoints of the worst-case delay step curve");
  kg_options(cur, "2..40", "2,4,8", "2^24");

  auto& srch = add("search", "exhaustive search against the max-delay strategy");
  srch.param("max-demotions", "3..6", "K values");
  srch.param("group-sizes", "2,3", "G values");
  srch.param("claims", "2..40", "N values");
  srch.param("model", "hero-pinned", "hero-pinned or sybil-only");
  srch.flag("witness", "include the longest path for each case");

  auto& fit = add("fit", "regression of the delay curve");
  kg_options(fit, "2..40", "2,4,8", "2^24");

  auto& vb = add("verify-bounds", "check closed-form bounds and the per-round inequalities");
  kg_options(vb, "2..40", "2,4,8", "2^24");
  vb.param("round-max-demotions", "3..6", "K values for the per-round checks");
  vb.param("round-group-sizes", "2,3", "G values for the per-round checks");
  vb.param("round-claims", "2..40", "N values for the per-round checks");

  auto& eco = add("economics", "bond, expenses and delay");
  time_options(eco);
  economics_options(eco);

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args, cmds);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, c] : cmds) {
      if (!c->app->parsed()) continue;
      if (name == "simulate") return run_simulate(*c, common);
      if (name == "tables") return run_tables(*c, common);
      if (name == "curve") return run_curve(*c, common);
      if (name == "search") return run_search(*c, common);
      if (name == "fit") return run_fit(*c, common);
      if (name == "verify-bounds") return run_verify_bounds(*c, common);
      if (name == "economics") return run_economics(*c, common);
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
