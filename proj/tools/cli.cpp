#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "symscat/dynamics.hpp"
#include "symscat/errors.hpp"
#include "symscat/models.hpp"
#include "symscat/network.hpp"
#include "symscat/scattering.hpp"
#include "symscat/symmetry.hpp"

namespace symscat::cli {
namespace {

class InputError : public Error {
 public:
  using Error::Error;
};

std::string num(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

// JSON has no literal for non-finite numbers.
std::string jnum(double x) { return std::isfinite(x) ? num(x) : "null"; }

std::string jcomplex(Complex z) { return "[" + jnum(z.real()) + ", " + jnum(z.imag()) + "]"; }

std::string jstring(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string jbool(bool b) { return b ? "true" : "false"; }

std::string jmatrix(const CMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + jcomplex(m(r, c));
    out += "]";
  }
  return out + "]";
}

double parse_plain(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw InputError("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) parts.push_back(current);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

struct Range {
  double a = 0.0, b = 0.0;
  std::size_t count = 1;

  std::vector<double> points() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
      out[i] = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
  }
};

Range parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InputError("range must look like a:b:n, got '" + text + "'");
  Range r{parse_real(parts[0]), parse_real(parts[1]), 0};
  long long n = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || n < 1)
    throw InputError("range point count must be a positive integer, got '" + parts[2] + "'");
  r.count = static_cast<std::size_t>(n);
  return r;
}

Range parse_k_range(const std::string& text) {
  const Range r = parse_range(text);
  if (!Momentum::in_band(r.a) || !Momentum::in_band(r.b))
    throw InputError("k range must lie strictly inside (-pi, 0), got '" + text + "'");
  return r;
}

std::pair<int, int> parse_ports(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InputError("ports must look like m,n, got '" + text + "'");
  auto to_int = [&](const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw InputError("port is not an integer: '" + s + "'");
    return v;
  };
  return {to_int(parts[0]), to_int(parts[1])};
}

// Output sink honoring --out.
class Output {
 public:
  explicit Output(std::ostream& fallback) : fallback_(fallback) {}

  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
  void set_path(const std::string& path) { path_ = path; }
  void flush() {
    if (path_.empty()) return;
    std::ofstream file(path_, std::ios::binary);
    if (!file) throw InputError("cannot write output file: " + path_);
    file << buffer_.str();
  }

 private:
  std::ostream& fallback_;
  std::ostringstream buffer_;
  std::string path_;
};

// Network source shared by every command.
struct Source {
  std::string network_file;
  std::string model;
  std::map<std::string, std::string> params;  // raw text of --phi etc.
  std::string ports;

  void attach(CLI::App* cmd, bool with_ports = true) {
    auto* net = cmd->add_option("--network", network_file, "Network document (JSON)");
    auto* mod = cmd->add_option("--model", model, "Catalog model name");
    net->excludes(mod);
    for (const char* name : {"phi", "gamma", "kappa", "J", "v2"}) {
      const std::string key = name;
      cmd->add_option_function<std::string>(
          "--" + key, [this, key](const std::string& v) { params[key] = v; },
          "Model parameter " + key);
    }
    if (with_ports) cmd->add_option("--ports", ports, "Port lead ids m,n");
  }

  ModelParameters model_parameters() const {
    ModelParameters out;
    for (const auto& [key, text] : params) out[key] = parse_real(text);
    return out;
  }

  CatalogEntry resolve(const ModelParameters& extra = {}) const {
    CatalogEntry entry;
    if (!model.empty()) {
      ModelParameters p = model_parameters();
      for (const auto& [key, value] : extra) p[key] = value;
      entry = make_model(model, p);
    } else if (!network_file.empty()) {
      if (!params.empty() || !extra.empty())
        throw InputError("model parameters need --model, not --network");
      entry.name = network_file;
      entry.network = load_network(network_file);
      if (entry.network.leads.size() >= 2) {
        entry.port_m = entry.network.leads[0].id;
        entry.port_n = entry.network.leads[1].id;
      }
    } else {
      throw InputError("one of --network or --model is required");
    }
    if (!ports.empty()) {
      const auto [m, n] = parse_ports(ports);
      // Known symmetries refer to the default port pair.
      if (m != entry.port_m || n != entry.port_n) entry.known_symmetries.clear();
      entry.port_m = m;
      entry.port_n = n;
    }
    return entry;
  }
};

std::string coefficients_json(const ScatteringCoefficients& c) {
  return "{\"k\": " + jnum(c.k) + ", \"tL\": " + jcomplex(c.t_l) + ", \"rL\": " + jcomplex(c.r_l) +
         ", \"tR\": " + jcomplex(c.t_r) + ", \"rR\": " + jcomplex(c.r_r) +
         ", \"divergent\": " + jbool(c.divergent) + "}";
}

double momentum_arg(const std::string& text) { return Momentum(parse_real(text)).value(); }

ScatteringNetwork prepared(const ScatteringNetwork& net) {
  validate(net);
  return is_normalized(net) ? net : augment_general_coupling(net);
}

std::string spec_json(const SymmetrySpec& spec, const MappingClass& mapping,
                      const ConstraintPrediction& prediction) {
  std::string out = "{\"kind\": \"" + std::string(1, to_char(spec.kind)) +
                    "\", \"parity\": " + std::to_string(spec.parity) +
                    ", \"class\": " + jstring(class_label(spec.kind, mapping)) +
                    ", \"mapping\": " + jstring(to_string(mapping));
  if (mapping.variant != MappingClass::Variant::Neither) out += ", \"alpha\": " + jnum(mapping.alpha);
  return out + ", \"prediction\": " + jstring(describe(prediction)) + ", \"u\": " + jmatrix(spec.u) +
         "}";
}

// ---- commands ------------------------------------------------------------

struct ScatterArgs {
  Source source;
  std::string k = "-pi/2";
};

int cmd_scatter(const ScatterArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  const auto c = two_port(entry.network, entry.port_m, entry.port_n, Momentum(momentum_arg(a.k)));
  out << coefficients_json(c) << "\n";
  return c.divergent ? kDivergent : kOk;
}

// Odometer step over a Cartesian grid; false once every point was visited.
bool advance(std::vector<std::size_t>& index, const std::vector<std::vector<double>>& values) {
  for (std::size_t d = index.size(); d-- > 0;) {
    if (++index[d] < values[d].size()) return true;
    index[d] = 0;
  }
  return false;
}

struct SweepArgs {
  Source source;
  std::string k;
  std::string k_range;
  std::vector<std::string> params;
  std::string format = "csv";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  std::vector<double> ks;
  if (!a.k_range.empty()) {
    ks = parse_k_range(a.k_range).points();
  } else {
    ks = {momentum_arg(a.k.empty() ? std::string("-pi/2") : a.k)};
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const auto& spec : a.params) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InputError("--param must look like name=a:b:n, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    if (std::find(names.begin(), names.end(), name) != names.end())
      throw InputError("parameter swept twice: " + name);
    names.push_back(name);
    values.push_back(parse_range(spec.substr(eq + 1)).points());
  }
  if (!names.empty() && a.source.model.empty())
    throw InputError("--param sweeps need --model");

  const bool json = a.format == "json";
  if (json) {
    out << "[";
  } else {
    out << "k";
    for (const auto& n : names) out << "," << n;
    for (const char* c : {"tL", "rL", "tR", "rR"})
      out << ",re_" << c << ",im_" << c << ",abs2_" << c;
    out << ",abs_ratio_t,abs_ratio_r,divergent\n";
  }

  // Cartesian product over parameters, first parameter outermost, k innermost.
  std::vector<std::size_t> index(names.size(), 0);
  bool first_record = true;
  while (true) {
    ModelParameters p;
    for (std::size_t i = 0; i < names.size(); ++i) p[names[i]] = values[i][index[i]];
    const CatalogEntry entry = a.source.resolve(p);
    for (const double kv : ks) {
      const auto c = two_port(entry.network, entry.port_m, entry.port_n, Momentum(kv));
      const double ratio_t = std::abs(c.t_r) / std::abs(c.t_l);
      const double ratio_r = std::abs(c.r_r) / std::abs(c.r_l);
      if (json) {
        out << (first_record ? "\n  " : ",\n  ") << "{\"k\": " << jnum(kv);
        for (std::size_t i = 0; i < names.size(); ++i)
          out << ", " << jstring(names[i]) << ": " << jnum(values[i][index[i]]);
        out << ", \"tL\": " << jcomplex(c.t_l) << ", \"rL\": " << jcomplex(c.r_l)
            << ", \"tR\": " << jcomplex(c.t_r) << ", \"rR\": " << jcomplex(c.r_r)
            << ", \"abs_ratio_t\": " << jnum(ratio_t) << ", \"abs_ratio_r\": " << jnum(ratio_r)
            << ", \"divergent\": " << jbool(c.divergent) << "}";
      } else {
        out << num(kv);
        for (std::size_t i = 0; i < names.size(); ++i) out << "," << num(values[i][index[i]]);
        for (const Complex z : {c.t_l, c.r_l, c.t_r, c.r_r})
          out << "," << num(z.real()) << "," << num(z.imag()) << "," << num(std::norm(z));
        out << "," << num(ratio_t) << "," << num(ratio_r) << "," << (c.divergent ? 1 : 0) << "\n";
      }
      first_record = false;
    }
    if (!advance(index, values)) break;
  }
  if (json) out << "\n]\n";
  return kOk;
}

struct SmatrixArgs {
  Source source;
  std::string k = "-pi/2";
};

int cmd_smatrix(const SmatrixArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  const double kv = momentum_arg(a.k);
  const SMatrix s = s_matrix(entry.network, Momentum(kv));
  out << "{\"k\": " << jnum(kv) << ", \"ports\": [";
  for (std::size_t i = 0; i < s.ports.size(); ++i) out << (i ? ", " : "") << s.ports[i];
  out << "], \"s\": " << jmatrix(s.s) << ", \"divergent\": " << jbool(s.divergent) << "}\n";
  return s.divergent ? kDivergent : kOk;
}

struct CheckArgs {
  Source source;
  std::string spec_file;
  std::string k = "-pi/2";
  double tol = kSymmetryTolerance;
};

int cmd_symmetry_check(const CheckArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  const ScatteringNetwork net = prepared(entry.network);
  const SymmetrySpec spec = load_symmetry_spec(a.spec_file);
  check_operator(spec);
  const CMatrix h = effective_two_port(net, entry.port_m, entry.port_n, Momentum(momentum_arg(a.k)));
  if (spec.u.rows() != h.rows())
    throw InputError("operator size " + std::to_string(spec.u.rows()) +
                     " does not match the centre size " + std::to_string(h.rows()));
  const double residual = verify(h, spec);
  const MappingClass mapping = classify_mapping(spec.u, find_lead(net, entry.port_m).site,
                                                find_lead(net, entry.port_n).site);
  const bool pass = residual <= a.tol;
  out << "{\"residual\": " << jnum(residual) << ", \"tol\": " << jnum(a.tol)
      << ", \"pass\": " << jbool(pass) << ", \"spec\": "
      << spec_json(spec, mapping, pass ? predict(spec, mapping) : ConstraintPrediction{})
      << "}\n";
  return pass ? kOk : kViolation;
}

struct DetectArgs {
  Source source;
  std::string k = "-pi/2";
};

int cmd_symmetry_detect(const DetectArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  const ScatteringNetwork net = prepared(entry.network);
  const CMatrix h = effective_two_port(net, entry.port_m, entry.port_n, Momentum(momentum_arg(a.k)));
  const auto found =
      detect(h, find_lead(net, entry.port_m).site, find_lead(net, entry.port_n).site);
  out << "{\"ports\": [" << entry.port_m << ", " << entry.port_n << "], \"found\": [";
  for (std::size_t i = 0; i < found.size(); ++i)
    out << (i ? ",\n  " : "\n  ")
        << spec_json(found[i].spec, found[i].mapping, predict(found[i].spec, found[i].mapping));
  out << (found.empty() ? "]}\n" : "\n]}\n");
  return kOk;
}

struct ValidateArgs {
  Source source;
  std::vector<std::string> spec_files;
  std::string k_range;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 50;
  double tol = kConstraintTolerance;
};

int cmd_symmetry_validate(const ValidateArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  std::vector<SymmetrySpec> specs;
  if (!a.spec_files.empty()) {
    for (const auto& f : a.spec_files) {
      specs.push_back(load_symmetry_spec(f));
      check_operator(specs.back());
    }
  } else {
    for (const auto& d : entry.known_symmetries) specs.push_back(d.spec);
  }

  std::vector<double> grid;
  if (!a.k_range.empty()) {
    grid = parse_k_range(a.k_range).points();
  } else if (a.seed) {
    std::mt19937_64 rng(*a.seed);
    std::uniform_real_distribution<double> dist(-std::numbers::pi, 0.0);
    while (grid.size() < a.samples) {
      const double kv = dist(rng);
      if (Momentum::in_band(kv)) grid.push_back(kv);
    }
  } else {
    grid = band_grid(a.samples);
  }

  const SweepReport report = validate_sweep(entry.network, entry.port_m, entry.port_n, specs, grid);
  double worst = 0.0;
  bool any_prediction = false;
  out << "{\"ports\": [" << entry.port_m << ", " << entry.port_n << "], \"points\": "
      << report.points << ", \"skipped_divergent\": " << report.skipped_divergent
      << ", \"specs\": [";
  for (std::size_t i = 0; i < report.specs.size(); ++i) {
    const auto& v = report.specs[i];
    any_prediction = any_prediction || !v.prediction.none();
    out << (i ? ",\n  " : "\n  ") << "{\"symmetry\": " << spec_json(v.spec, v.mapping, v.prediction)
        << ", \"spec_residual\": " << jnum(v.max_spec_residual) << ", \"checks\": [";
    for (std::size_t j = 0; j < v.checks.size(); ++j) {
      const auto& c = v.checks[j];
      worst = std::max(worst, c.max_violation);
      out << (j ? ", " : "") << "{\"name\": " << jstring(c.name)
          << ", \"max_violation\": " << jnum(c.max_violation)
          << ", \"satisfied\": " << jbool(c.max_violation <= a.tol) << "}";
    }
    out << "]}";
  }
  out << (report.specs.empty() ? "]" : "\n]");
  const bool pass = worst <= a.tol;
  out << ", \"prediction\": " << jstring(any_prediction ? "constrained" : "none")
      << ", \"max_violation\": " << jnum(worst) << ", \"tol\": " << jnum(a.tol)
      << ", \"witness\": {\"max_abs_tL_minus_abs_tR\": " << jnum(report.max_t_modulus_gap)
      << ", \"max_abs_rL_minus_abs_rR\": " << jnum(report.max_r_modulus_gap) << "}";
  if (!any_prediction)
    out << ", \"note\": "
        << jstring("no symmetric constraint predicted; pass is vacuous, observed |t| asymmetry " +
                   num(report.max_t_modulus_gap) + ", |r| asymmetry " +
                   num(report.max_r_modulus_gap));
  out << ", \"pass\": " << jbool(pass) << "}\n";
  return pass ? kOk : kViolation;
}

struct SimulateArgs {
  Source source;
  std::string direction = "forward";
  std::string k = "-pi/2";
  double sigma = 20.0;
  std::optional<double> s0;
  std::size_t lead_length = 400;
  double dt = 0.01;
  std::string snapshots;
  double snapshot_every = 10.0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const CatalogEntry entry = a.source.resolve();
  if (a.direction != "forward" && a.direction != "backward")
    throw InputError("--direction must be forward or backward");
  PacketSpec packet;
  packet.lead = a.direction == "forward" ? entry.port_m : entry.port_n;
  packet.k0 = momentum_arg(a.k);
  packet.sigma = a.sigma;
  packet.s0 = a.s0 ? *a.s0 : std::max(100.0, std::ceil(4.0 * a.sigma) + 1.0);
  SimulationParams params;
  params.lead_length = a.lead_length;
  params.dt = a.dt;
  // Wide momentum spread can reach slow or singular parts of the band; such
  // runs are informational and reported even when the centre never clears.
  params.measure_uncleared = packet.sigma < 20.0;
  if (!(params.dt > 0.0) || params.dt > 0.1) throw InputError("--dt must lie in (0, 0.1]");

  std::optional<SnapshotSink> sink;
  std::ofstream snap_file;
  if (!a.snapshots.empty()) {
    snap_file.open(a.snapshots, std::ios::binary);
    if (!snap_file) throw InputError("cannot write snapshot file: " + a.snapshots);
    auto header = std::make_shared<bool>(true);
    sink = [&snap_file, header](const LatticeState& s, const LatticeLayout& layout) {
      write_snapshot_csv(snap_file, s, layout, *header);
      *header = false;
    };
  }

  const ComparisonReport r =
      compare_with_steady_state(entry.network, packet, params, sink, a.snapshot_every);
  auto channels = [](double reflected, const std::map<int, double>& transmitted) {
    std::string s = "{\"reflected\": " + jnum(reflected) + ", \"transmitted\": {";
    bool first = true;
    for (const auto& [id, v] : transmitted) {
      s += (first ? "\"" : ", \"") + std::to_string(id) + "\": " + jnum(v);
      first = false;
    }
    return s + "}}";
  };
  out << "{\"direction\": " << jstring(a.direction) << ", \"incident_lead\": " << packet.lead
      << ", \"k0\": " << jnum(packet.k0) << ", \"sigma\": " << jnum(packet.sigma)
      << ", \"s0\": " << jnum(packet.s0) << ", \"L\": " << params.lead_length
      << ", \"measured\": " << channels(r.measured.reflected, r.measured.transmitted)
      << ", \"expected\": " << channels(r.expected_reflected, r.expected_transmitted)
      << ", \"max_relative_deviation\": " << jnum(r.max_relative_deviation)
      << ", \"tolerance\": " << jnum(kDynamicsTolerance) << ", \"pass\": " << jbool(r.passed)
      << ", \"informational\": " << jbool(r.informational)
      << ", \"cleared\": " << jbool(r.cleared)
      << ", \"centre_residual\": " << jnum(r.measured.center)
      << ", \"finish_time\": " << jnum(r.finish_time) << "}\n";
  return r.passed || r.informational ? kOk : kViolation;
}

int cmd_model_list(const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << "[";
    const auto entries = catalog();
    for (std::size_t i = 0; i < entries.size(); ++i)
      out << (i ? ",\n  " : "\n  ") << "{\"name\": " << jstring(entries[i].name)
          << ", \"ports\": [" << entries[i].port_m << ", " << entries[i].port_n
          << "], \"notes\": " << jstring(entries[i].notes) << "}";
    out << "\n]\n";
  } else {
    for (const auto& name : model_names()) out << name << "\n";
  }
  return kOk;
}

// "--k -pi/2" would otherwise be read as a short flag cluster.
std::vector<std::string> join_negative_values(const std::vector<std::string>& args) {
  auto looks_negative = [](const std::string& s) {
    return s.size() > 1 && s[0] == '-' &&
           (std::isdigit(static_cast<unsigned char>(s[1])) || s[1] == '.' ||
            s.compare(1, 2, "pi") == 0);
  };
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.size() > 2 && a.starts_with("--") && a.find('=') == std::string::npos &&
        i + 1 < args.size() && looks_negative(args[i + 1])) {
      out.push_back(a + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(a);
    }
  }
  return out;
}

}  // namespace

double parse_real(const std::string& raw) {
  std::string text;
  for (const char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return parse_plain(text);

  std::string coefficient = text.substr(0, pos);
  std::string rest = text.substr(pos + 2);
  if (!coefficient.empty() && coefficient.back() == '*') coefficient.pop_back();
  double scale = 1.0;
  if (coefficient == "-") {
    scale = -1.0;
  } else if (!coefficient.empty() && coefficient != "+") {
    scale = parse_plain(coefficient);
  }
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') throw InputError("not a number: '" + raw + "'");
    divisor = parse_plain(rest.substr(1));
    if (divisor == 0.0) throw InputError("division by zero in '" + raw + "'");
  }
  return scale * std::numbers::pi / divisor;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering coefficients and symmetry analysis for non-Hermitian tight-binding "
               "networks",
               "symscat"};
  app.require_subcommand(1);
  Output output(out);
  std::string out_path;
  app.add_option("--out", out_path, "Write results to this file instead of stdout");

  std::function<int(std::ostream&)> action;

  ScatterArgs scatter;
  auto* scatter_cmd = app.add_subcommand("scatter", "Two-port coefficients at one momentum");
  scatter.source.attach(scatter_cmd);
  scatter_cmd->add_option("--k", scatter.k, "Lead momentum in (-pi, 0)");
  scatter_cmd->callback([&] { action = [&](std::ostream& o) { return cmd_scatter(scatter, o); }; });

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Coefficients over a momentum/parameter grid");
  sweep.source.attach(sweep_cmd);
  auto* k_opt = sweep_cmd->add_option("--k", sweep.k, "Single momentum");
  sweep_cmd->add_option("--k-range", sweep.k_range, "a:b:n inside (-pi, 0)")->excludes(k_opt);
  sweep_cmd->add_option("--param", sweep.params, "name=a:b:n model parameter range");
  sweep_cmd->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->callback([&] { action = [&](std::ostream& o) { return cmd_sweep(sweep, o); }; });

  SmatrixArgs smatrix;
  auto* smatrix_cmd = app.add_subcommand("smatrix", "Full S-matrix over all leads");
  smatrix.source.attach(smatrix_cmd, false);
  smatrix_cmd->add_option("--k", smatrix.k, "Lead momentum in (-pi, 0)");
  smatrix_cmd->callback([&] { action = [&](std::ostream& o) { return cmd_smatrix(smatrix, o); }; });

  auto* symmetry_cmd = app.add_subcommand("symmetry", "Symmetry analysis");
  symmetry_cmd->require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = symmetry_cmd->add_subcommand("check", "Residual of one symmetry spec");
  check.source.attach(check_cmd);
  check_cmd->add_option("--spec", check.spec_file, "Symmetry spec document")->required();
  check_cmd->add_option("--k", check.k, "Momentum for lead self-energies");
  check_cmd->add_option("--tol", check.tol, "Residual tolerance");
  check_cmd->callback(
      [&] { action = [&](std::ostream& o) { return cmd_symmetry_check(check, o); }; });

  DetectArgs detect_args;
  auto* detect_cmd = symmetry_cmd->add_subcommand("detect", "Search for protecting symmetries");
  detect_args.source.attach(detect_cmd);
  detect_cmd->add_option("--k", detect_args.k, "Momentum for lead self-energies");
  detect_cmd->callback(
      [&] { action = [&](std::ostream& o) { return cmd_symmetry_detect(detect_args, o); }; });

  ValidateArgs validate_args;
  auto* validate_cmd =
      symmetry_cmd->add_subcommand("validate", "Check predicted constraints over a k grid");
  validate_args.source.attach(validate_cmd);
  validate_cmd->add_option("--spec", validate_args.spec_files, "Symmetry spec documents");
  validate_cmd->add_option("--k-range", validate_args.k_range, "a:b:n inside (-pi, 0)");
  validate_cmd->add_option("--seed", validate_args.seed, "Sample random momenta with this seed");
  validate_cmd->add_option("--samples", validate_args.samples, "Number of momenta")
      ->check(CLI::PositiveNumber);
  validate_cmd->add_option("--tol", validate_args.tol, "Constraint tolerance");
  validate_cmd->callback(
      [&] { action = [&](std::ostream& o) { return cmd_symmetry_validate(validate_args, o); }; });

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Wave-packet simulation on a lattice");
  simulate.source.attach(simulate_cmd);
  simulate_cmd->add_option("--direction", simulate.direction, "forward or backward");
  simulate_cmd->add_option("--k", simulate.k, "Carrier momentum");
  simulate_cmd->add_option("--sigma", simulate.sigma, "Packet width in sites");
  simulate_cmd->add_option("--s0", simulate.s0, "Packet centre distance from the connection");
  simulate_cmd->add_option("--L", simulate.lead_length, "Lead length in sites");
  simulate_cmd->add_option("--dt", simulate.dt, "RK4 step");
  simulate_cmd->add_option("--snapshots", simulate.snapshots, "CSV file for amplitude snapshots");
  simulate_cmd->add_option("--snapshot-every", simulate.snapshot_every, "Snapshot interval")
      ->check(CLI::PositiveNumber);
  simulate_cmd->callback(
      [&] { action = [&](std::ostream& o) { return cmd_simulate(simulate, o); }; });

  auto* model_cmd = app.add_subcommand("model", "Catalog models");
  model_cmd->require_subcommand(1);
  std::string list_format = "text";
  auto* list_cmd = model_cmd->add_subcommand("list", "List model names");
  list_cmd->add_option("--format", list_format)->check(CLI::IsMember({"text", "json"}));
  list_cmd->callback(
      [&] { action = [&](std::ostream& o) { return cmd_model_list(list_format, o); }; });

  Source emit_source;
  std::string emit_name;
  auto* emit_cmd = model_cmd->add_subcommand("emit", "Print a model as a network document");
  emit_cmd->add_option("name", emit_name, "Model name");
  emit_source.attach(emit_cmd, false);
  emit_cmd->callback([&] {
    action = [&](std::ostream& o) {
      if (!emit_name.empty()) {
        if (!emit_source.model.empty() && emit_source.model != emit_name)
          throw InputError("model named twice");
        emit_source.model = emit_name;
      }
      if (emit_source.model.empty()) throw InputError("model emit needs a model name");
      o << serialize_network(emit_source.resolve().network);
      return static_cast<int>(kOk);
    };
  });

  try {
    std::vector<std::string> args = join_negative_values(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  if (!action) {
    err << "error: no command given\n";
    return kInputError;
  }

  try {
    output.set_path(out_path);
    const int code = action(output.stream());
    output.flush();
    return code;
  } catch (const Instability& e) {
    err << "error: " << e.what() << "\n";
    return kInstability;
  } catch (const PacketNotCleared& e) {
    err << "error: " << e.what() << "\n";
    return kInstability;
  } catch (const SingularMatrix& e) {
    err << "error: " << e.what() << "\n";
    return kDivergent;
  } catch (const InconsistentReflection& e) {
    err << "error: " << e.what() << "\n";
    return kDivergent;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace symscat::cli
