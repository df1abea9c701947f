#include "qiopa/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "qiopa/channel.hpp"
#include "qiopa/decoherence.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/metrology.hpp"
#include "qiopa/oracle.hpp"
#include "qiopa/version.hpp"
#include "qiopa/wigner.hpp"

namespace qiopa::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything one command produces; CSV and JSON are two views of it.
struct Result {
  std::string command;
  std::map<std::string, std::string> params;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  json grid = json::object();
  std::vector<double> values;
  double truncation_deficit = 0.0;
};

struct Common {
  std::string output = "-";
  std::string format = "csv";
};

struct Options {
  std::string family;
  std::string seed = "1";
  double g = 1.0;
  std::string R = "0";
  double alpha = 2.0;
  double phi = M_PI / 2.0;
  int sign = 1;
  std::string grid;
  std::string ygrid;
  std::string slice;
  std::string x;
  std::string k;
  std::string ks = "0:20:1";
  int cutoff = 0;
  std::string quantity = "product";
  std::string basis = "equatorial";
};

double single_value(const std::string& spec, const char* name) {
  const auto v = parse_sweep(spec);
  if (v.size() != 1) throw ConfigError(std::string("--") + name + " takes a single value");
  return v.front();
}

std::vector<double> sweep_of(const std::string& spec, const char* name) {
  auto v = parse_sweep(spec);
  if (v.size() < 2) throw ConfigError(std::string("--") + name + " sweep needs at least two points");
  return v;
}

GainParams gain_of(double g) {
  if (!std::isfinite(g) || g < 0.0) throw ConfigError("--g must be finite and non-negative");
  return GainParams::from_gain(g);
}

LossChannel channel_of(double R) {
  if (!std::isfinite(R) || R < 0.0 || R > 1.0) throw ConfigError("R must lie in [0, 1]");
  return LossChannel::from_reflectivity(R);
}

std::pair<int, int> seed_of(const std::string& s) {
  int n = 0, m = 0;
  char tail = 0;
  const int got = std::sscanf(s.c_str(), "%d,%d%c", &n, &m, &tail);
  if (got == 1 || got == 2) {
    if (n < 0 || m < 0) throw ConfigError("--seed entries must be non-negative");
    return {n, got == 2 ? m : 0};
  }
  throw ConfigError("--seed expects N or N,M");
}

CssParams css_of(const Options& o) {
  if (!std::isfinite(o.alpha) || o.alpha < 0.0) throw ConfigError("--alpha must be finite and non-negative");
  if (o.sign != 1 && o.sign != -1) throw ConfigError("--sign must be +1 or -1");
  return {o.alpha, o.phi, o.sign};
}

void add_curve(Result& r, const std::string& axis, const std::string& value_name, const std::vector<double>& xs,
               const std::vector<double>& ys) {
  r.header = {axis, value_name};
  for (std::size_t i = 0; i < xs.size(); ++i) r.rows.push_back({xs[i], ys[i]});
  r.grid = {{axis, xs}};
  r.values = ys;
}

Result cmd_wigner(const Options& o) {
  Result r;
  const auto xs = parse_sweep(o.grid);
  const auto ys = o.ygrid.empty() ? xs : parse_sweep(o.ygrid);
  const auto ch = channel_of(single_value(o.R, "R"));
  const auto [N, M] = seed_of(o.seed);
  const auto gain = gain_of(o.g);

  if (!o.slice.empty()) {
    double x2 = 0.0, y2 = 0.0;
    char tail = 0;
    if (std::sscanf(o.slice.c_str(), "%lf,%lf%c", &x2, &y2, &tail) != 2) throw ConfigError("--slice expects X2,Y2");
    if (o.family != "collinear" && o.family != "noncollinear")
      throw ConfigError("--slice applies to collinear and noncollinear families");
    r.header = {"X1", "Y1", "X2", "Y2", "W"};
    for (double X : xs)
      for (double Y : ys) {
        double w;
        if (o.family == "collinear")
          w = w_collinear(N, M, gain, ch, PhasePoint2{cd(X, Y), cd(x2, y2)});
        else
          w = w_noncollinear(N, M, gain, o.phi, ch, PhasePoint4{cd(X, Y), 0.0, cd(x2, y2), 0.0});
        r.rows.push_back({X, Y, x2, y2, w});
        r.values.push_back(w);
      }
    r.grid = {{"X1", xs}, {"Y1", ys}, {"X2", x2}, {"Y2", y2}};
    return r;
  }

  WignerField f;
  if (o.family == "single")
    f = single_mode_field(N, gain, ch, xs, ys);
  else if (o.family == "collinear")
    f = collinear_field(N, M, gain, ch, xs, ys);
  else if (o.family == "noncollinear")
    f = noncollinear_field(N, M, gain, o.phi, ch, xs, ys);
  else if (o.family == "css")
    f = css_field(css_of(o), ch, xs, ys);
  else
    throw ConfigError("--family must be single, collinear, noncollinear or css");
  r.header = {"X", "Y", "W"};
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) r.rows.push_back({xs[i], ys[j], f.at(i, j)});
  r.grid = {{"X", xs}, {"Y", ys}};
  r.values = f.values;
  return r;
}

Family family_of(const std::string& s) {
  if (s == "single") return Family::SingleMode;
  if (s == "collinear") return Family::Collinear;
  if (s == "noncollinear") return Family::Noncollinear;
  if (s == "css") return Family::Css;
  throw ConfigError("--family must be single, collinear, noncollinear or css");
}

Result cmd_negativity(const Options& o) {
  Result r;
  const Family fam = family_of(o.family);
  WitnessParams wp{gain_of(o.g), {}};
  if (fam == Family::Css) wp.css = css_of(o);
  const auto Rs = sweep_of(o.R, "R");
  std::vector<double> w;
  for (double R : Rs) w.push_back(negativity_at_origin(fam, wp, channel_of(R)));
  add_curve(r, "R", "value", Rs, w);
  return r;
}

Result cmd_bures(const Options& o) {
  Result r;
  const auto xs = sweep_of(o.x, "x");
  std::vector<double> D;
  if (o.family == "css") {
    const CssParams p = css_of(o);
    const double a2 = p.alpha * p.alpha;
    if (!o.k.empty()) throw ConfigError("--k applies to macro-qubit families");
    for (double x : xs) {
      if (a2 == 0.0 || x / a2 > 1.0 || x < 0.0) throw ConfigError("x must lie in [0, alpha^2]");
      D.push_back(css_bures_analytic(p.alpha, p.phi, channel_of(x / a2)).superpositions);
    }
  } else if (o.family == "equatorial" || o.family == "hv") {
    const GainParams gain = gain_of(o.g);
    if (gain.g > 1.5) throw ConfigError("--g above 1.5 is out of range for macro-qubit distances");
    MacroqubitOptions mo;
    mo.basis = o.family == "hv" ? MacroBasis::HV : MacroBasis::Equatorial;
    mo.cutoff = o.cutoff;
    if (!o.k.empty()) {
      const double k = single_value(o.k, "k");
      if (k < 0 || k != std::floor(k)) throw ConfigError("--k must be a non-negative integer");
      mo.filter = OFilterConfig{static_cast<int>(k)};
    }
    const double n = macroqubit_mean_photons(gain);
    for (double x : xs) {
      if (x < 0.0 || x > n) throw ConfigError("x must lie in [0, 4 mbar + 1]");
      const BuresPoint pt = macroqubit_bures(gain, channel_of(x / n), mo);
      D.push_back(pt.D);
      r.truncation_deficit = std::max(r.truncation_deficit, pt.truncation_deficit);
    }
  } else {
    throw ConfigError("--family must be css, equatorial or hv");
  }
  add_curve(r, "x", "D", xs, D);
  return r;
}

Result cmd_distribution(const Options& o) {
  Result r;
  const auto ch = channel_of(single_value(o.R, "R"));
  DensityMatrix rho;
  if (o.family == "css") {
    rho = css_lossy_density(css_of(o), ch, o.cutoff).fock;
  } else {
    const GainParams gain = gain_of(o.g);
    const int cut = o.cutoff > 0 ? o.cutoff : default_cutoff(gain);
    if (o.family == "single")
      rho = single_mode_reference(seed_of(o.seed).first, gain, ch, cut);
    else if (o.family == "equatorial")
      rho = equatorial_lossy_density(gain, o.phi, ch, cut);
    else if (o.family == "hv")
      rho = hv_lossy_density(gain, HvSeed::H, ch, cut);
    else
      throw ConfigError("--family must be css, single, equatorial or hv");
  }
  const Eigen::MatrixXd p = photon_distribution(rho);
  r.header = {"n", "m", "p"};
  std::vector<double> ns, ms;
  for (int n = 0; n < rho.dim_a; ++n) ns.push_back(n);
  for (int m = 0; m < rho.dim_b; ++m) ms.push_back(m);
  for (int n = 0; n < rho.dim_a; ++n)
    for (int m = 0; m < rho.dim_b; ++m) {
      const double v = rho.single_mode() ? p(n, 0) : p(n, m);
      r.rows.push_back({double(n), double(m), v});
      r.values.push_back(v);
    }
  r.grid = {{"n", ns}, {"m", ms}};
  r.truncation_deficit = rho.trace_deficit;
  return r;
}

Result cmd_uncertainty(const Options& o) {
  Result r;
  const int N = seed_of(o.seed).first;
  if (N > 1) throw ConfigError("--seed must be 0 or 1");
  if (o.quantity != "product" && o.quantity != "dx" && o.quantity != "dy")
    throw ConfigError("--quantity must be product, dx or dy");
  const GainParams gain = gain_of(o.g);
  const auto Rs = sweep_of(o.R, "R");
  std::vector<double> v;
  for (double R : Rs) {
    const Uncertainty u = quadrature_uncertainty(N, gain, channel_of(R));
    v.push_back(o.quantity == "dx" ? u.dx : o.quantity == "dy" ? u.dy : u.product());
  }
  add_curve(r, "R", "value", Rs, v);
  return r;
}

Result cmd_ofilter(const Options& o) {
  Result r;
  const GainParams gain = gain_of(o.g);
  if (gain.g > 1.5) throw ConfigError("--g above 1.5 is out of range for macro-qubit states");
  if (o.basis != "equatorial" && o.basis != "hv") throw ConfigError("--basis must be equatorial or hv");
  const auto ch = channel_of(single_value(o.R, "R"));
  const auto ks = sweep_of(o.ks, "k");
  const int cut = o.cutoff > 0 ? o.cutoff : default_cutoff(gain);
  const auto pair = macroqubit_pair(gain, ch, o.basis == "hv" ? MacroBasis::HV : MacroBasis::Equatorial, o.phi, cut);
  std::vector<double> P;
  for (double k : ks) {
    if (k < 0 || k != std::floor(k)) throw ConfigError("--k must be non-negative integers");
    P.push_back(ofilter_success_probability(pair.first, OFilterConfig{static_cast<int>(k)}));
  }
  r.truncation_deficit = pair.first.trace_deficit;
  add_curve(r, "k", "value", ks, P);
  return r;
}

std::string render_csv(const Result& r) {
  std::ostringstream s;
  s << "# params: command=" << r.command;
  for (const auto& [k, v] : r.params) s << ' ' << k << '=' << v;
  s << " version=" << kVersion << " truncation_deficit=" << format_number(r.truncation_deficit) << '\n';
  for (std::size_t i = 0; i < r.header.size(); ++i) s << (i ? "," : "") << r.header[i];
  s << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << format_number(row[i]);
    s << '\n';
  }
  return s.str();
}

std::string render_json(const Result& r) {
  json j;
  j["command"] = r.command;
  j["params"] = r.params;
  j["grid"] = r.grid;
  j["values"] = r.values;
  j["version"] = kVersion;
  j["truncation_deficit"] = r.truncation_deficit;
  return j.dump(1) + "\n";
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + tmp + " for writing");
    f << text;
    if (!f.flush()) throw ConfigError("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed number '" + tok + "' in '" + spec + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) throw ConfigError("malformed number '" + tok + "' in '" + spec + "'");
    parts.push_back(v);
  }
  if (spec.empty() || spec.back() == ':') throw ConfigError("malformed sweep '" + spec + "'");
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw ConfigError("sweep '" + spec + "' must be start:stop:step");
  std::vector<double> g;
  try {
    g = linear_grid(parts[0], parts[1], parts[2]);
  } catch (const UnsupportedInput& e) {
    throw ConfigError(e.what());
  }
  if (g.size() < 2) throw ConfigError("sweep '" + spec + "' must have at least two points");
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Macrostate Wigner functions, loss, and distinguishability"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  Options o;
  std::map<std::string, std::string> given;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "output file, - for stdout")->capture_default_str();
    sub->add_option("--format", common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };
  auto family = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("--family", o.family, "state family");
    if (required) opt->required();
  };
  auto gain = [&](CLI::App* sub) { sub->add_option("--g", o.g, "amplifier gain")->capture_default_str(); };
  auto css = [&](CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "coherent amplitude")->capture_default_str();
    sub->add_option("--sign", o.sign, "superposition sign, +1 or -1")->capture_default_str();
  };
  auto phi = [&](CLI::App* sub) { sub->add_option("--phi", o.phi, "phase angle")->capture_default_str(); };
  auto seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "seed photons N or N,M")->capture_default_str(); };
  auto cutoff = [&](CLI::App* sub) {
    sub->add_option("--cutoff", o.cutoff, "Fock cutoff per mode, 0 for automatic")->capture_default_str();
  };

  auto* wig = app.add_subcommand("wigner", "Wigner function on a grid");
  family(wig);
  seed(wig);
  gain(wig);
  css(wig);
  phi(wig);
  wig->add_option("--R", o.R, "loss reflectivity")->capture_default_str();
  wig->add_option("--grid", o.grid, "X grid start:stop:step")->required();
  wig->add_option("--ygrid", o.ygrid, "Y grid, defaults to --grid");
  wig->add_option("--slice", o.slice, "fix the second mode at X2,Y2");
  add_common(wig);

  auto* neg = app.add_subcommand("negativity", "witness value against R");
  family(neg);
  gain(neg);
  css(neg);
  phi(neg);
  neg->add_option("--R", o.R, "loss reflectivity sweep")->required();
  add_common(neg);

  auto* bur = app.add_subcommand("bures", "Bures distance against lost photons x");
  family(bur);
  gain(bur);
  css(bur);
  phi(bur);
  cutoff(bur);
  bur->add_option("--x", o.x, "x sweep")->required();
  bur->add_option("--k", o.k, "O-Filter threshold");
  add_common(bur);

  auto* dist = app.add_subcommand("distribution", "photon-number distribution");
  family(dist);
  gain(dist);
  css(dist);
  phi(dist);
  seed(dist);
  cutoff(dist);
  dist->add_option("--R", o.R, "loss reflectivity")->capture_default_str();
  add_common(dist);

  auto* unc = app.add_subcommand("uncertainty", "quadrature uncertainty against R");
  gain(unc);
  seed(unc);
  unc->add_option("--R", o.R, "loss reflectivity sweep")->required();
  unc->add_option("--quantity", o.quantity, "product, dx or dy")->capture_default_str();
  add_common(unc);

  auto* ofl = app.add_subcommand("ofilter", "O-Filter success probability against k");
  gain(ofl);
  phi(ofl);
  cutoff(ofl);
  ofl->add_option("--R", o.R, "loss reflectivity")->capture_default_str();
  ofl->add_option("--k", o.ks, "threshold sweep")->capture_default_str();
  ofl->add_option("--basis", o.basis, "equatorial or hv")->capture_default_str();
  add_common(ofl);

  std::vector<std::string> argv_s{"qiopa"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_s) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "output" || name == "format") continue;
    const std::string v = opt->count() ? opt->results().front() : opt->get_default_str();
    if (!v.empty()) given[name] = v;
  }

  try {
    Result r;
    const std::string name = sub->get_name();
    if (name == "wigner")
      r = cmd_wigner(o);
    else if (name == "negativity")
      r = cmd_negativity(o);
    else if (name == "bures")
      r = cmd_bures(o);
    else if (name == "distribution")
      r = cmd_distribution(o);
    else if (name == "uncertainty")
      r = cmd_uncertainty(o);
    else
      r = cmd_ofilter(o);
    r.command = name;
    r.params = given;
    const std::string text = common.format == "json" ? render_json(r) : render_csv(r);
    if (common.output == "-")
      out << text;
    else
      write_atomic(common.output, text);
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedInput& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const TruncationError& e) {
    err << "numeric error: " << e.what() << " (achieved deficit " << e.achieved_deficit << ")\n";
    return kNumericError;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace qiopa::cli
