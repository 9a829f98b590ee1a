#pragma once

/**
 * Command-line front end. Five subcommands:
 *
 *   predict    zeta table and growth factor R for a side-branching family
 *   analyze    branch statistics of a tree read from a Newick file
 *   simulate   Monte Carlo ensemble estimates against the predicted table
 *   verify     convergence of normalized branch counts toward R^(1-j)
 *   prunecheck sample order K+1, prune once, compare against direct order K
 *
 * Reports are CSV (default) or JSON. Every report starts with the
 * effective configuration ("# key=value" comment lines in CSV, a "config"
 * object in JSON), so identical invocations produce byte-identical output.
 * Reals carry 17 significant digits. Each subcommand accepts --config FILE
 * with flat key=value lines; command-line flags override file values.
 *
 * Exit codes: 0 success, 1 invalid input or configuration, 2 runtime
 * failure (overflow, node-cap, I/O).
 */

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hortonlab/error.hpp"
#include "hortonlab/format.hpp"
#include "hortonlab/horton.hpp"
#include "hortonlab/newick.hpp"
#include "hortonlab/sampler.hpp"
#include "hortonlab/strahler.hpp"
#include "hortonlab/tokunaga.hpp"
#include "hortonlab/tree.hpp"

namespace hortonlab::cli {

/// Effective settings of one invocation, echoed into every report.
struct RunConfig {
  std::string command;
  std::string family;
  double a = 0.0;
  double c = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  std::string t_list;
  int K = 0;
  int Kmax = 0;
  int jmax = -1;  // -1: default to min(6, Kmax)
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string dist = "poisson";
  std::string format = "csv";
  std::string out;
  std::string input;
  std::string emit_trees;
  std::string config_path;
};

namespace detail {

using Echo = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::string name;
  std::vector<std::string> cols;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct Report {
  std::string command;
  Echo config;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Table> tables;
};

inline std::string cell_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return real17(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

inline std::string render_csv(const Report& r) {
  std::string out = "# command=" + r.command + "\n";
  for (const auto& [k, v] : r.config) out += "# " + k + "=" + v + "\n";
  for (const auto& [k, v] : r.results.items())
    out += "# " + k + "=" + cell_text(v) + "\n";
  bool first = true;
  for (const Table& tb : r.tables) {
    if (!first) out += "\n";
    first = false;
    for (std::size_t i = 0; i < tb.cols.size(); ++i)
      out += (i ? "," : "") + tb.cols[i];
    out += "\n";
    for (const auto& row : tb.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ",";
        out += cell_text(row[i]);
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string render_json(const Report& r) {
  nlohmann::json j;
  j["command"] = r.command;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  for (const auto& [k, v] : r.results.items()) j[k] = v;
  for (const Table& tb : r.tables) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : tb.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[tb.cols[i]] = row[i];
      rows.push_back(obj);
    }
    j[tb.name] = rows;
  }
  return j.dump(2) + "\n";
}

inline std::string render(const Report& r, const std::string& format) {
  return format == "json" ? render_json(r) : render_csv(r);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot open for writing: " + path);
  f << text;
  f.flush();
  if (!f) raise(errc::io_error, "write failed: " + path);
}

inline void emit_report(const RunConfig& cfg, const Report& rep) {
  std::string text = render(rep, cfg.format);
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(cfg.out, text);
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) raise(errc::io_error, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (f.bad()) raise(errc::io_error, "read failed: " + path);
  return ss.str();
}

/// key=value pairs from a flat config file; '#' comments and blank lines
/// are skipped, keys and values are trimmed.
inline std::vector<std::pair<std::string, std::string>> read_config_pairs(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t eq = line.find('=', b);
    if (eq == std::string::npos)
      raise(errc::bad_config, "config line " + std::to_string(lineno) +
                                  " is not key=value: " + line);
    std::string key = line.substr(b, eq - b);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t'))
      key.pop_back();
    if (key.empty())
      raise(errc::bad_config,
            "config line " + std::to_string(lineno) + " has an empty key");
    std::string val = line.substr(eq + 1);
    std::size_t vb = val.find_first_not_of(" \t\r");
    std::size_t ve = val.find_last_not_of(" \t\r");
    val = vb == std::string::npos ? std::string() : val.substr(vb, ve - vb + 1);
    out.emplace_back(std::move(key), std::move(val));
  }
  return out;
}

inline bool has_flag(const std::vector<std::string>& args,
                     const std::string& flag) {
  for (const std::string& a : args)
    if (a == flag || (a.size() > flag.size() &&
                      a.compare(0, flag.size(), flag) == 0 &&
                      a[flag.size()] == '='))
      return true;
  return false;
}

/// --config FILE pre-pass: append "--key value" for every file entry whose
/// flag is absent from the command line. The parser then validates injected
/// and typed flags alike, unknown keys fail as unknown flags, and explicit
/// command-line flags win because their keys are never injected.
inline void inject_config_args(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return;
  for (auto& [key, value] : read_config_pairs(path)) {
    std::string flag = "--" + key;
    if (!has_flag(args, flag)) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

inline std::vector<double> parse_term_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // trim blanks
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    item = b == std::string::npos ? std::string() : item.substr(b, e - b + 1);
    if (item.empty())
      raise(errc::bad_config, "--T list has an empty entry");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      raise(errc::bad_config, "--T entry is not a number: " + item);
    }
    if (used != item.size())
      raise(errc::bad_config, "--T entry is not a number: " + item);
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
    if (pos == text.size())
      raise(errc::bad_config, "--T list ends with a comma");
  }
  return out;
}

/// Build the sequence named by --family, checking that the flags the
/// family needs were actually given.
inline TokunagaSequence sequence_from(const CLI::App* sub, RunConfig& cfg) {
  auto given = [&](const char* flag) { return sub->count(flag) > 0; };
  if (cfg.family == "geometric" || cfg.family == "differentiated") {
    if (!given("--a") || !given("--c"))
      raise(errc::bad_config, cfg.family + " family requires --a and --c");
    return cfg.family == "geometric"
               ? TokunagaSequence::geometric(cfg.a, cfg.c)
               : TokunagaSequence::differentiated(cfg.a, cfg.c);
  }
  if (cfg.family == "shallow") {
    if (!given("--T1"))
      raise(errc::bad_config, "shallow family requires --T1 (--T2 defaults to 0)");
    return TokunagaSequence::shallow(cfg.t1, cfg.t2);
  }
  if (cfg.family == "explicit") {
    if (!given("--T"))
      raise(errc::bad_config,
            "explicit family requires --T \"t1,t2,...\" (may be empty)");
    return TokunagaSequence::explicit_list(parse_term_list(cfg.t_list));
  }
  raise(errc::bad_config, "unknown family: " + cfg.family);
}

/// Family part of the config echo; only flags meaningful to the family.
inline void echo_family(Echo& e, const RunConfig& cfg) {
  e.emplace_back("family", cfg.family);
  if (cfg.family == "geometric" || cfg.family == "differentiated") {
    e.emplace_back("a", real17(cfg.a));
    e.emplace_back("c", real17(cfg.c));
  } else if (cfg.family == "shallow") {
    e.emplace_back("T1", real17(cfg.t1));
    e.emplace_back("T2", real17(cfg.t2));
  } else {
    e.emplace_back("T", cfg.t_list);
  }
}

inline SideDistribution distribution_from(const std::string& name) {
  if (name == "poisson") return SideDistribution::poisson;
  if (name == "geometric") return SideDistribution::geometric;
  if (name == "deterministic") return SideDistribution::deterministic;
  raise(errc::bad_config, "unknown distribution: " + name);
}

// ---- subcommand bodies ----

inline void cmd_predict(const CLI::App* sub, RunConfig& cfg) {
  TokunagaSequence seq = sequence_from(sub, cfg);
  ZetaTable table = zeta_by_recursion(seq, cfg.K);
  ExponentResult er = horton_exponent(seq);

  Report rep;
  rep.command = "predict";
  echo_family(rep.config, cfg);
  rep.config.emplace_back("K", std::to_string(cfg.K));
  rep.config.emplace_back("format", cfg.format);
  rep.results["R"] = er.R;
  rep.results["w0"] = er.w0;
  rep.results["root_method"] = root_method_name(er.method);
  rep.results["residual"] = er.residual;

  Table t;
  t.name = "rows";
  t.cols = {"k", "zeta_k", "xi_k", "R_pow_1_minus_k"};
  for (int k = 1; k <= cfg.K; ++k)
    t.rows.push_back({k, table.zeta[static_cast<std::size_t>(k) - 1],
                      table.xi[static_cast<std::size_t>(k) - 1],
                      std::pow(er.R, static_cast<double>(1 - k))});
  rep.tables.push_back(std::move(t));
  emit_report(cfg, rep);
}

inline void cmd_analyze(RunConfig& cfg) {
  BinaryTree t = parse_tree(read_text_file(cfg.input));
  HortonStatistics h = horton_statistics(t);

  Report rep;
  rep.command = "analyze";
  rep.config.emplace_back("input", cfg.input);
  rep.config.emplace_back("format", cfg.format);
  rep.results["order"] = h.order;
  rep.results["nodes"] = t.size();

  Table bk;
  bk.name = "branch_counts";
  bk.cols = {"k", "N_k"};
  for (int k = 1; k <= h.order; ++k) bk.rows.push_back({k, h.n(k)});
  rep.tables.push_back(std::move(bk));

  Table sk;
  sk.name = "side_branch_counts";
  sk.cols = {"i", "j", "N_ij"};
  for (int i = 1; i < h.order; ++i)
    for (int j = i + 1; j <= h.order; ++j) sk.rows.push_back({i, j, h.n(i, j)});
  rep.tables.push_back(std::move(sk));
  emit_report(cfg, rep);
}

inline void cmd_simulate(const CLI::App* sub, RunConfig& cfg) {
  TokunagaSequence seq = sequence_from(sub, cfg);
  SamplerConfig sc;
  sc.seq = seq;
  sc.K = cfg.K;
  sc.distribution = distribution_from(cfg.dist);
  sc.seed = cfg.seed;
  sc.samples = cfg.samples;
  SimulationReport sim = estimate(sc);
  ZetaTable theory = zeta_by_recursion(seq, cfg.K);

  Report rep;
  rep.command = "simulate";
  echo_family(rep.config, cfg);
  rep.config.emplace_back("K", std::to_string(cfg.K));
  rep.config.emplace_back("samples", std::to_string(cfg.samples));
  rep.config.emplace_back("seed", std::to_string(cfg.seed));
  rep.config.emplace_back("dist", cfg.dist);
  rep.config.emplace_back("format", cfg.format);

  Table bk;
  bk.name = "branches";
  bk.cols = {"k", "mean_Nk", "se_Nk", "theory_Nk"};
  for (int k = 1; k <= cfg.K; ++k)
    bk.rows.push_back({k, sim.nk(k), sim.nk_se(k),
                       theory.zeta[static_cast<std::size_t>(k) - 1]});
  rep.tables.push_back(std::move(bk));

  Table sk;
  sk.name = "side_branches";
  sk.cols = {"i", "j", "mean_Nij", "se_Nij", "T_hat_ij", "T_theory"};
  for (int i = 1; i < cfg.K; ++i)
    for (int j = i + 1; j <= cfg.K; ++j)
      sk.rows.push_back({i, j, sim.nij(i, j), sim.nij_se(i, j),
                         sim.t_hat(i, j), seq.term(j - i)});
  rep.tables.push_back(std::move(sk));

  if (!cfg.emit_trees.empty()) {
    // Regenerate by index rather than holding the whole ensemble.
    std::string lines;
    for (std::uint64_t i = 0; i < sc.samples; ++i) {
      lines += serialize_tree(sample_tree(sc, i));
      lines += "\n";
    }
    write_text_file(cfg.emit_trees, lines);
  }
  emit_report(cfg, rep);
}

inline void cmd_verify(const CLI::App* sub, RunConfig& cfg) {
  TokunagaSequence seq = sequence_from(sub, cfg);
  int jmax = sub->count("--jmax") > 0 ? cfg.jmax : std::min(6, cfg.Kmax);
  ConvergenceReport conv = verify_strong_horton(seq, cfg.Kmax, jmax);

  Report rep;
  rep.command = "verify";
  echo_family(rep.config, cfg);
  rep.config.emplace_back("Kmax", std::to_string(cfg.Kmax));
  rep.config.emplace_back("jmax", std::to_string(jmax));
  rep.config.emplace_back("format", cfg.format);
  rep.results["R_estimate"] = conv.R_estimate;
  rep.results["diverged"] = conv.diverged;
  rep.results["tail_fluctuation"] = conv.tail_fluctuation;
  rep.results["per_j_errors"] = conv.per_j_errors;

  Table t;
  t.name = "ratios";
  t.cols = {"K", "ratio", "R_estimate_error"};
  for (int K = 1; K <= cfg.Kmax; ++K) {
    double ratio = conv.ratio_sequence[static_cast<std::size_t>(K) - 1];
    t.rows.push_back({K, ratio, std::abs(ratio - conv.R_estimate)});
  }
  rep.tables.push_back(std::move(t));
  emit_report(cfg, rep);
}

inline void cmd_prunecheck(const CLI::App* sub, RunConfig& cfg) {
  TokunagaSequence seq = sequence_from(sub, cfg);
  SamplerConfig sc;
  sc.seq = seq;
  sc.K = cfg.K;
  sc.distribution = distribution_from(cfg.dist);
  sc.seed = cfg.seed;
  sc.samples = cfg.samples;
  PruneInvarianceReport pr = prune_invariance_check(sc);

  Report rep;
  rep.command = "prunecheck";
  echo_family(rep.config, cfg);
  rep.config.emplace_back("K", std::to_string(cfg.K));
  rep.config.emplace_back("samples", std::to_string(cfg.samples));
  rep.config.emplace_back("seed", std::to_string(cfg.seed));
  rep.config.emplace_back("dist", cfg.dist);
  rep.config.emplace_back("format", cfg.format);
  rep.results["shift_identities_exact"] = pr.shift_identities_exact;
  rep.results["max_cross_se"] = pr.max_cross_se;
  rep.results["max_direct_theory_se"] = pr.max_direct_theory_se;
  rep.results["max_pruned_theory_se"] = pr.max_pruned_theory_se;

  Table t;
  t.name = "pairs";
  t.cols = {"i", "j", "t_hat_direct", "se_direct",
            "t_hat_pruned", "se_pruned", "T_theory"};
  for (int i = 1; i < cfg.K; ++i)
    for (int j = i + 1; j <= cfg.K; ++j)
      t.rows.push_back({i, j, pr.direct.t_hat(i, j), pr.direct.t_se(i, j),
                        pr.pruned.t_hat(i, j), pr.pruned.t_se(i, j),
                        seq.term(j - i)});
  rep.tables.push_back(std::move(t));
  emit_report(cfg, rep);
}

}  // namespace detail

/// Parse argv and execute. Returns the process exit code.
inline int run(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Horton-Strahler branch statistics of random self-similar trees"};
  app.require_subcommand(1);

  auto add_family_flags = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family,
                    "side-branching family")
        ->required()
        ->check(CLI::IsMember(
            {"geometric", "shallow", "differentiated", "explicit"}));
    sub->add_option("--a", cfg.a, "scale parameter (geometric/differentiated)");
    sub->add_option("--c", cfg.c, "growth parameter (geometric/differentiated)");
    sub->add_option("--T1", cfg.t1, "first term (shallow)");
    sub->add_option("--T2", cfg.t2, "second term (shallow, default 0)");
    sub->add_option("--T", cfg.t_list,
                    "comma-separated term list (explicit; may be empty)");
  };
  auto add_io_flags = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "write the report to this file");
    sub->add_option("--config", cfg.config_path,
                    "flat key=value file; command-line flags win");
  };

  CLI::App* predict = app.add_subcommand(
      "predict", "expected branch counts and growth factor R");
  add_family_flags(predict);
  predict->add_option("--K", cfg.K, "tree order")->required();
  add_io_flags(predict);

  CLI::App* analyze =
      app.add_subcommand("analyze", "branch statistics of a Newick tree file");
  analyze->add_option("--input", cfg.input, "Newick file")->required();
  add_io_flags(analyze);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo branch statistics of sampled trees");
  add_family_flags(simulate);
  simulate->add_option("--K", cfg.K, "tree order")->required();
  simulate->add_option("--samples", cfg.samples, "ensemble size")->required();
  simulate->add_option("--seed", cfg.seed, "random seed")->required();
  simulate->add_option("--dist", cfg.dist, "side-count distribution")
      ->check(CLI::IsMember({"poisson", "geometric", "deterministic"}));
  simulate->add_option("--emit-trees", cfg.emit_trees,
                       "also write every sampled tree to this file");
  add_io_flags(simulate);

  CLI::App* verify = app.add_subcommand(
      "verify", "convergence of normalized branch counts toward R^(1-j)");
  add_family_flags(verify);
  verify->add_option("--Kmax", cfg.Kmax, "largest order")->required();
  verify->add_option("--jmax", cfg.jmax, "deepest normalized entry (default min(6, Kmax))");
  add_io_flags(verify);

  CLI::App* prunecheck = app.add_subcommand(
      "prunecheck", "prune order K+1 samples once, compare against order K");
  add_family_flags(prunecheck);
  prunecheck->add_option("--K", cfg.K, "order of the direct ensemble")->required();
  prunecheck->add_option("--samples", cfg.samples, "ensemble size")->required();
  prunecheck->add_option("--seed", cfg.seed, "random seed")->required();
  prunecheck->add_option("--dist", cfg.dist, "side-count distribution")
      ->check(CLI::IsMember({"poisson", "geometric", "deterministic"}));
  add_io_flags(prunecheck);

  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    detail::inject_config_args(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_validation() ? 1 : 2;
  }
  std::vector<const char*> ptrs;
  ptrs.reserve(args.size() + 1);
  ptrs.push_back(argc > 0 ? argv[0] : "hortonlab");
  for (const std::string& s : args) ptrs.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (predict->parsed())
      detail::cmd_predict(predict, cfg);
    else if (analyze->parsed())
      detail::cmd_analyze(cfg);
    else if (simulate->parsed())
      detail::cmd_simulate(simulate, cfg);
    else if (verify->parsed())
      detail::cmd_verify(verify, cfg);
    else
      detail::cmd_prunecheck(prunecheck, cfg);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_validation() ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

/// Convenience overload for tests: args without the program name.
inline int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("hortonlab");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> ptrs;
  ptrs.reserve(full.size());
  for (const std::string& s : full) ptrs.push_back(s.c_str());
  return run(static_cast<int>(ptrs.size()), ptrs.data());
}

}  // namespace hortonlab::cli
