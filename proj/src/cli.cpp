#include "sapcensus/cli.hpp"

#include <charconv>
#include <chrono>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sapcensus/census.hpp"
#include "sapcensus/oracle.hpp"

namespace sapcensus {

namespace {

using ordered_json = nlohmann::ordered_json;

int parse_int_or_auto(const std::string& s, const char* flag, int auto_value) {
  if (s == "auto") return auto_value;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw UsageError(std::string(flag) + " must be an integer or 'auto'");
  return v;
}

struct CommonFlags {
  std::string mode = "sap";
  int n = 0;
  std::string method;
  std::string k = "auto";
  std::string q = "auto";
  int jobs = 1;
  std::string format = "json";
  std::size_t memory_limit = kDefaultMemoryLimit;
  bool allow_large = false;
  bool tightened_q = false;
  bool no_transpose = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->set_help_flag("--help", "print this help and exit");  // frees -h/--h
  sub->add_option("--mode", f.mode, "lattice mode: sap (polygons) or saw (walks)")
      ->check(CLI::IsMember({"sap", "saw"}));
  sub->add_option("--n", f.n, "maximum length")
      ->required()
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--k", f.k, "class modulus for the skip method, or 'auto'");
  sub->add_option("--q", f.q,
                  "crossing budget at stop cuts (skip method), or 'auto'");
  sub->add_option("--jobs", f.jobs, "max parallel sweep tasks")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", f.format,
                  "output format (verify prints text, bench always CSV)")
      ->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--memory-limit", f.memory_limit,
                  "per-sweep state memory budget in bytes");
  sub->add_flag("--allow-large", f.allow_large,
                "override the oracle feasibility guards");
  sub->add_flag("--tightened-q", f.tightened_q,
                "use the tightened per-rectangle crossing budget");
  sub->add_flag("--no-transpose-opt", f.no_transpose,
                "sweep both orientations of every rectangle");
}

LatticeMode mode_of(const CommonFlags& f) {
  return f.mode == "saw" ? LatticeMode::Saw : LatticeMode::Sap;
}

Method method_of(const std::string& name) {
  if (name == "oracle") return Method::Oracle;
  if (name == "skip") return Method::Skip;
  return Method::FullTm;
}

CensusConfig config_of(const CommonFlags& f, Method method) {
  CensusConfig cfg;
  cfg.nmax = f.n;
  cfg.mode = mode_of(f);
  cfg.method = method;
  cfg.k = parse_int_or_auto(f.k, "--k", 0);
  cfg.q = parse_int_or_auto(f.q, "--q", -1);
  cfg.jobs = f.jobs;
  cfg.transpose_opt = !f.no_transpose;
  cfg.tightened_q = f.tightened_q;
  cfg.allow_large = f.allow_large;
  cfg.memory_limit_bytes = f.memory_limit;
  return cfg;
}

ordered_json counts_json(const CountSeries& s) {
  ordered_json o = ordered_json::object();
  for (int n = 0; n <= s.nmax(); ++n)
    if (s.at(n) != 0) o[std::to_string(n)] = s.at(n).get_str();
  return o;
}

void counts_csv(std::ostream& out, const CountSeries& s) {
  out << "length,count\n";
  for (int n = 0; n <= s.nmax(); ++n)
    if (s.at(n) != 0) out << n << ',' << s.at(n).get_str() << '\n';
}

int oracle_guard(LatticeMode mode) {
  return mode == LatticeMode::Sap ? 26 : 20;
}

int do_census(const CommonFlags& f, std::ostream& out) {
  const CensusResult res = census(config_of(f, method_of(f.method)));
  if (f.format == "csv") {
    counts_csv(out, res.series);
  } else {
    ordered_json o;
    o["mode"] = mode_name(res.mode);
    o["method"] = method_name(res.method);
    o["nmax"] = res.nmax;
    o["k"] = res.k;
    o["q"] = res.q;
    o["counts"] = counts_json(res.series);
    o["seconds"] = res.seconds;
    o["peak_states"] = res.peak_states;
    out << o.dump() << '\n';
  }
  return 0;
}

int do_rect(const CommonFlags& f, int w, int h, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const LatticeMode mode = mode_of(f);
  const Method method = method_of(f.method);
  const Rect rect{w, h};
  int k = 0;
  int q = 0;
  SweepStats stats;
  CountSeries series(f.n);
  if (method == Method::Oracle) {
    series = inscribed_oracle(rect, mode, f.n, f.allow_large);
  } else {
    SweepOptions opt;
    opt.memory_limit_bytes = f.memory_limit;
    if (method == Method::FullTm) {
      series = full_sweep(rect, mode, f.n, opt, &stats);
    } else {
      k = parse_int_or_auto(f.k, "--k", 0);
      if (k == 0) k = choose_k(f.n);
      q = parse_int_or_auto(f.q, "--q", -1);
      if (q < 0) q = k >= 2 ? f.n / k : 0;
      series = inscribed_incl_excl(rect, mode, f.n, k, q, opt, &stats);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (f.format == "csv") {
    counts_csv(out, series);
  } else {
    ordered_json o;
    o["mode"] = mode_name(mode);
    o["method"] = method_name(method);
    o["nmax"] = f.n;
    o["w"] = w;
    o["h"] = h;
    o["k"] = k;
    o["q"] = q;
    o["counts"] = counts_json(series);
    o["seconds"] = seconds;
    o["peak_states"] = stats.peak_states;
    out << o.dump() << '\n';
  }
  return 0;
}

int do_verify(const CommonFlags& f, std::ostream& out, std::ostream& err) {
  const LatticeMode mode = mode_of(f);
  struct Run {
    std::string label;
    CountSeries series;
  };
  std::vector<Run> runs;
  const int guard = oracle_guard(mode);
  if (f.allow_large || f.n <= guard) {
    runs.push_back({"oracle", census(config_of(f, Method::Oracle)).series});
  } else {
    err << "note: oracle skipped (n=" << f.n << " exceeds guard " << guard
        << "; pass --allow-large to include it)\n";
  }
  runs.push_back({"tm", census(config_of(f, Method::FullTm)).series});
  int k = parse_int_or_auto(f.k, "--k", 0);
  if (k == 0) k = choose_k(f.n);
  if (k >= 2 && k < f.n) {
    const CensusResult res = census(config_of(f, Method::Skip));
    runs.push_back({"skip(k=" + std::to_string(res.k) + ")", res.series});
  } else {
    err << "note: skip method skipped (no k with 2 <= k < n=" << f.n << ")\n";
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    for (int n = 0; n <= f.n; ++n) {
      if (runs[0].series.at(n) != runs[i].series.at(n)) {
        out << "verify: FAIL (" << runs[0].label << " vs " << runs[i].label
            << " first differ at length " << n << ": "
            << runs[0].series.at(n).get_str() << " != "
            << runs[i].series.at(n).get_str() << ")\n";
        return 1;
      }
    }
  }
  out << "verify: PASS (mode=" << mode_name(mode) << ", n=" << f.n
      << "; methods:";
  for (const auto& r : runs) out << ' ' << r.label;
  out << ")\n";
  return 0;
}

int do_bench(const CommonFlags& f, bool method_given, std::ostream& out,
             std::ostream& err) {
  const LatticeMode mode = mode_of(f);
  std::vector<Method> methods;
  if (method_given) {
    methods.push_back(method_of(f.method));
  } else {
    if (f.allow_large || f.n <= oracle_guard(mode))
      methods.push_back(Method::Oracle);
    else
      err << "note: oracle skipped (n exceeds guard; pass --allow-large)\n";
    methods.push_back(Method::FullTm);
    const int k = parse_int_or_auto(f.k, "--k", 0);
    const int k_eff = k == 0 ? choose_k(f.n) : k;
    if (k_eff >= 2 && k_eff < f.n)
      methods.push_back(Method::Skip);
    else
      err << "note: skip method skipped (no k with 2 <= k < n)\n";
  }
  out << "method,mode,n,k,seconds,peak_states\n";
  for (Method m : methods) {
    const CensusResult res = census(config_of(f, m));
    out << method_name(m) << ',' << mode_name(mode) << ',' << f.n << ','
        << res.k << ',' << res.seconds << ',' << res.peak_states << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact census of self-avoiding polygons and walks on the square lattice"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  CommonFlags cf, rf, vf, bf;
  int rect_w = 0, rect_h = 0;

  CLI::App* census_sub =
      app.add_subcommand("census", "whole-series counts up to --n");
  add_common(census_sub, cf);
  census_sub->add_option("--method", cf.method, "oracle, tm, or skip")
      ->check(CLI::IsMember({"oracle", "tm", "skip"}));

  CLI::App* rect_sub =
      app.add_subcommand("rect", "inscribed series for one rectangle");
  add_common(rect_sub, rf);
  rect_sub->add_option("--method", rf.method, "oracle, tm, or skip")
      ->check(CLI::IsMember({"oracle", "tm", "skip"}));
  rect_sub->add_option("--w", rect_w, "rectangle width (horizontal edges)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  rect_sub->add_option("--h", rect_h, "rectangle height (vertical edges)")
      ->required()
      ->check(CLI::NonNegativeNumber);

  CLI::App* verify_sub = app.add_subcommand(
      "verify", "run every feasible method and compare the series");
  add_common(verify_sub, vf);

  CLI::App* bench_sub =
      app.add_subcommand("bench", "time the methods; CSV on stdout");
  add_common(bench_sub, bf);
  CLI::Option* bench_method =
      bench_sub->add_option("--method", bf.method, "bench only this method")
          ->check(CLI::IsMember({"oracle", "tm", "skip"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (census_sub->parsed()) return do_census(cf, out);
    if (rect_sub->parsed()) return do_rect(rf, rect_w, rect_h, out);
    if (verify_sub->parsed()) return do_verify(vf, out, err);
    if (bench_sub->parsed())
      return do_bench(bf, bench_method->count() > 0, out, err);
    err << "error: missing subcommand\n" << app.help();
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("sapcensus");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sapcensus
