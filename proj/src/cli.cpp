#include "octfake/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "octfake/octagon.hpp"

namespace octfake {

namespace {

using ojson = nlohmann::ordered_json;

// Bad flag values surface as exit status 2, like parser errors.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  std::string out_path;
  std::string trace_out;
  std::optional<long> max_n;
  std::optional<double> eps;
};

long parse_long(const std::string& text, const std::string& what) {
  long v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) throw FlagError(what + " must be an integer, got '" + text + "'");
  return v;
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw FlagError(what + " must be a number, got '" + text + "'");
  return v;
}

std::optional<long> as_long(const std::string& text) {
  try {
    return parse_long(text, "");
  } catch (const FlagError&) {
    return std::nullopt;
  }
}

long check_range(long n, const Options& o, long default_max) {
  const long limit = o.max_n.value_or(default_max);
  if (n < -limit || n > limit) {
    throw FlagError("|n| = " + std::to_string(n < 0 ? -n : n) + " exceeds --max-n " + std::to_string(limit));
  }
  return n;
}

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  buf << f.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// Writes the primary output to -o when given, else to out.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_file(o.out_path, text);
  }
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

FlatComplex complex_from(const std::string& arg, const Options& o, std::istream& in) {
  if (const auto n = as_long(arg)) return build_complex(normal_form(check_range(*n, o, 1'000'000)));
  return load_surface(read_input(arg, in));
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& o, const std::string& arg, std::ostream& out) {
  const long n = check_range(parse_long(arg, "n"), o, 1'000'000);
  emit(o, out, save_surface_text(build_complex(normal_form(n))));
  return 0;
}

ojson step_trace(const FlatComplex& c, bool left) {
  const Topology t(c);
  SaddleConnection gamma = unit_horizontal(t);
  if (!left) gamma = reversed(t, gamma);
  const TracedSegment twin = twin_on_side(t, gamma, left ? TwinSide::Left : TwinSide::Right);
  return {{"surgery", left ? "left" : "right"},
          {"saddle_connection", ojson::parse(trace_to_json(gamma.segment).dump())},
          {"twin", ojson::parse(trace_to_json(twin).dump())}};
}

int cmd_iterate(const Options& o, const std::string& arg, std::ostream& out) {
  const long n = check_range(parse_long(arg, "n"), o, 1000);
  const std::vector<FlatComplex> seq = iterate_sequence(n);
  const StripPositions got = extract_normal_form(seq.back());
  const NormalForm want = normal_form(n);
  const bool match = got == StripPositions{want.P, want.Pp};
  if (!o.trace_out.empty()) {
    ojson steps = ojson::array();
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      ojson s = step_trace(seq[i], n > 0);
      s["from"] = n > 0 ? static_cast<long>(i) : -static_cast<long>(i);
      steps.push_back(std::move(s));
    }
    write_file(o.trace_out, dump(steps));
  }
  if (o.json) {
    emit(o, out, ojson{{"n", n}, {"P", got.P.to_string()}, {"Pp", got.Pp.to_string()}, {"oracle_match", match}}.dump() +
                     "\n");
  } else {
    std::ostringstream s;
    s << "n = " << n << "\nP  = " << got.P << "  (" << format_float(got.P) << ")\nP' = " << got.Pp << "  ("
      << format_float(got.Pp) << ")\noracle: " << (match ? "match" : "MISMATCH") << "\n";
    emit(o, out, s.str());
  }
  return match ? 0 : 1;
}

ojson systole_json(const SystoleReport& r) { return ojson::parse(to_json(r).dump()); }

int cmd_systole(const Options& o, const std::string& arg, std::istream& in, std::ostream& out) {
  ojson j;
  bool ok = true;
  if (const auto n = as_long(arg)) {
    check_range(*n, o, 1'000'000);
    const SystoleReport cf = systole_closed_form(*n);
    const SystoleReport geo = systole_geometric(*n);
    ok = cf.sq_len == geo.sq_len && cf.count == geo.count && cf.endpoints == geo.endpoints;
    j = ojson{{"n", *n}};
    const ojson body = systole_json(cf);
    for (const auto& [k, v] : body.items()) j[k] = v;
    j["geometric_match"] = ok;
  } else {
    const Systole s = systole(load_surface(read_input(arg, in)));
    j = ojson{{"sq_len", s.sq_length.to_string()},
              {"sq_len_float", format_float(s.sq_length)},
              {"count", s.connections.size()}};
  }
  if (o.json) {
    emit(o, out, dump(j));
  } else {
    std::ostringstream s;
    if (j.contains("n")) s << "n = " << j["n"].get<long>() << "\nfamily: " << j["family"].get<int>() << "\n";
    s << "systole^2 = " << j["sq_len"].get<std::string>() << "  (" << j["sq_len_float"].get<std::string>() << ")\n";
    s << "count: " << j["count"].get<int>() << "\n";
    if (j.contains("endpoints")) {
      s << "endpoints:";
      for (const auto& e : j["endpoints"]) s << " " << e.get<std::string>();
      s << "\ngeometric check: " << (ok ? "match" : "MISMATCH") << "\n";
    }
    emit(o, out, s.str());
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o, const std::string& arg, std::istream& in, std::ostream& out) {
  const FakeReport r = verify_fake(load_surface(read_input(arg, in)));
  if (o.json) {
    emit(o, out, dump(ojson::parse(to_json(r).dump())));
  } else {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::ostringstream s;
    s << "single cone point of order 2: " << yn(r.single_cone_point) << "\n"
      << "genus: " << r.genus << "\n"
      << "area: " << r.area << (r.area_matches ? "" : "  (expected 2+2√2)") << "\n"
      << "octagon periods: " << yn(r.periods_match) << "\n";
    if (r.normal_form) {
      s << "normal form: P = " << r.normal_form->P << ", P' = " << r.normal_form->Pp << "\n";
    } else {
      s << "normal form: " << r.extraction_error << "\n";
    }
    s << "fake octagon: " << yn(r.is_fake()) << "\n";
    emit(o, out, s.str());
  }
  return r.invariants_pass() ? 0 : 1;
}

int cmd_table(const Options& o, const std::string& a_text, const std::string& b_text, std::ostream& out) {
  const long a = check_range(parse_long(a_text, "a"), o, 100'000);
  const long b = check_range(parse_long(b_text, "b"), o, 100'000);
  if (a > b) throw FlagError("table needs a <= b");
  std::vector<TableRow> rows;
  for (long n = a; n <= b; ++n) rows.push_back(table_row(n));
  const bool csv = o.out_path.size() >= 4 && o.out_path.ends_with(".csv");
  if (o.json) {
    ojson arr = ojson::array();
    for (const TableRow& r : rows) {
      arr.push_back({{"n", r.nf.n},
                     {"P", r.nf.P.to_string()},
                     {"P_float", format_float(r.nf.P)},
                     {"Pp", r.nf.Pp.to_string()},
                     {"Pp_float", format_float(r.nf.Pp)},
                     {"family", r.systole.family},
                     {"sq_len", r.systole.sq_len.to_string()},
                     {"sq_len_float", format_float(r.systole.sq_len)},
                     {"count", r.systole.count},
                     {"partners", r.partners}});
    }
    emit(o, out, dump(arr));
  } else {
    emit(o, out, csv ? table_csv(rows) : table_text(rows));
  }
  return 0;
}

int cmd_partners(const Options& o, const std::string& arg, std::ostream& out) {
  const long n = parse_long(arg, "n");
  if (n == 0) throw FlagError("partners needs n != 0");
  const long window = o.max_n.value_or(100);
  if (window < 1) throw FlagError("--max-n must be positive");
  if (n < -window || n > window) throw FlagError("n lies outside the brute-force window");
  const auto [rep, x] = family_one_representative(n);
  const std::set<long> predicted = same_systole_partners(n);
  const std::set<long> brute = brute_force_partners(n, window);
  std::set<long> clipped;
  for (long m : predicted) {
    if (m >= -window && m <= window) clipped.insert(m);
  }
  const bool ok = clipped == brute;
  if (o.json) {
    emit(o, out, dump(ojson{{"n", n},
                            {"representative", rep},
                            {"x", x.to_string()},
                            {"predicted", predicted},
                            {"brute_force", brute},
                            {"window", window},
                            {"match", ok}}));
  } else {
    std::ostringstream s;
    auto list = [&](const std::set<long>& v) {
      std::string t;
      for (long m : v) t += (t.empty() ? "" : ", ") + std::to_string(m);
      return "{" + t + "}";
    };
    s << "n = " << n << ", family-one representative " << rep << " at x = " << x << "\n"
      << "predicted:   " << list(predicted) << "\n"
      << "brute force: " << list(brute) << "  (m in [" << -window << ", " << window << "])\n"
      << (ok ? "match" : "MISMATCH") << "\n";
    emit(o, out, s.str());
  }
  return ok ? 0 : 1;
}

int cmd_approx(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const long m = parse_long(args.at(0), "m");
  if (args.size() > 1 && o.eps) throw FlagError("eps given twice");
  if (args.size() > 2 && o.max_n) throw FlagError("N given twice");
  const double eps = args.size() > 1 ? parse_double(args[1], "eps") : o.eps.value_or(0.01);
  const long N = args.size() > 2 ? parse_long(args[2], "N") : o.max_n.value_or(100'000);
  if (!(eps > 0)) throw FlagError("eps must be positive");
  if (N < 1) throw FlagError("N must be at least 1");
  const Approximation a = approximate(m, eps, N);
  char dist[32];
  std::snprintf(dist, sizeof dist, "%.12f", a.dist);
  if (o.json) {
    emit(o, out, dump(ojson{{"m", m},
                            {"n", a.n},
                            {"dist", dist},
                            {"dist_P", a.dist_P.to_string()},
                            {"dist_Pp", a.dist_Pp.to_string()},
                            {"reached", a.reached},
                            {"density_relation", density_relation_holds()}}));
  } else {
    std::ostringstream s;
    s << "m = " << m << " -> n = " << a.n << "\n"
      << "distance " << dist << (a.reached ? " < " : " >= ") << eps << "\n"
      << "|P_n - P_m|   = " << a.dist_P << "\n"
      << "|P'_n - P'_m| = " << a.dist_Pp << "\n";
    if (!a.reached) s << "not reached within N = " << N << "\n";
    emit(o, out, s.str());
  }
  return 0;
}

int cmd_render(const Options& o, const std::string& arg, std::istream& in, std::ostream& out) {
  emit(o, out, render_svg(complex_from(arg, o, in)));
  return 0;
}

int report_failure(const Options& o, std::ostream& out, std::ostream& err, const std::string& kind,
                   const std::string& message, int code) {
  if (o.json) {
    out << ojson{{"error", kind}, {"message", message}}.dump() << "\n";
  } else {
    err << "error: " << message << "\n";
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fake octagons by saddle-connection surgery", "octfake"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("-o", o.out_path, "Write output to a file");
  app.add_option("--trace-out", o.trace_out, "Write surgery traces as JSON (iterate)");
  app.add_option("--max-n", o.max_n, "Bound on |n|, or the search range");
  app.add_option("--eps", o.eps, "Tolerance for approx");

  std::string a1, a2;
  std::vector<std::string> approx_args;
  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  CLI::App* gen = sub("gen", "Emit the strip complex of Oct_n as JSON");
  gen->add_option("n", a1)->required();
  CLI::App* iterate = sub("iterate", "Build Oct_n by surgery and compare with the closed form");
  iterate->add_option("n", a1)->required();
  CLI::App* sys = sub("systole", "Systole of Oct_n or of a surface file");
  sys->add_option("source", a1, "n or a file ('-' for stdin)")->required();
  CLI::App* verify = sub("verify", "Check the fake-octagon invariants of a surface file");
  verify->add_option("file", a1, "Surface file ('-' for stdin)")->required();
  CLI::App* table = sub("table", "Invariant table for n in [a, b]");
  table->add_option("a", a1)->required();
  table->add_option("b", a2)->required();
  CLI::App* partners = sub("partners", "Indices with the same systole length as n");
  partners->add_option("n", a1)->required();
  CLI::App* approx = sub("approx", "Find Oct_n close to Oct_m: approx m [eps] [N]");
  approx->add_option("args", approx_args)->required()->expected(1, 3);
  CLI::App* render = sub("render", "SVG drawing of Oct_n or of a surface file");
  render->add_option("source", a1, "n or a file ('-' for stdin)")->required();

  try {
    // CLI11 consumes a reversed argument list.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_failure(o, out, err, "usage", e.what(), 2);
  }

  try {
    if (*gen) return cmd_gen(o, a1, out);
    if (*iterate) return cmd_iterate(o, a1, out);
    if (*sys) return cmd_systole(o, a1, in, out);
    if (*verify) return cmd_verify(o, a1, in, out);
    if (*table) return cmd_table(o, a1, a2, out);
    if (*partners) return cmd_partners(o, a1, out);
    if (*approx) return cmd_approx(o, approx_args, out);
    if (*render) return cmd_render(o, a1, in, out);
  } catch (const FlagError& e) {
    return report_failure(o, out, err, "usage", e.what(), 2);
  } catch (const ParseError& e) {
    return report_failure(o, out, err, "parse", e.what(), 1);
  } catch (const InvalidComplex& e) {
    return report_failure(o, out, err, "invalid_complex", e.what(), 1);
  } catch (const std::exception& e) {
    return report_failure(o, out, err, "failure", e.what(), 1);
  }
  return 2;
}

}  // namespace octfake
