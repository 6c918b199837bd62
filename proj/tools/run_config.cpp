#include "run_config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "modprime/format.hpp"

namespace modprime::cli {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CLI::ValidationError("not a number: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (out.empty()) throw CLI::ValidationError("empty list");
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

template <class M>
std::string cfg_show(const M& v) {
  if constexpr (std::is_same_v<M, double>) {
    return format_real(v);
  } else {
    return std::to_string(v);
  }
}

template <class T>
std::string show_list(const std::vector<T>& v) {
  std::vector<std::string> parts;
  for (const T& e : v) {
    if constexpr (std::is_same_v<T, double>) {
      parts.push_back(format_real(e));
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
      parts.push_back(format_complex(e));
    } else {
      parts.push_back(std::to_string(e));
    }
  }
  return join(parts);
}

using Binder = std::function<CLI::Option*(CLI::App&, RunConfig&, const std::string&, const std::string&)>;
using Shower = std::function<std::string(const RunConfig&)>;

struct OptionDef {
  std::string name;
  std::string help;
  Binder bind;
  Shower show;
};

template <class T>
T parse_item(const std::string& s) {
  if constexpr (std::is_same_v<T, double>) {
    return parse_real(s);
  } else if constexpr (std::is_same_v<T, std::complex<double>>) {
    return parse_complex(s);
  } else {
    // Integers accept 1e5 style input as long as the value is integral.
    const double v = parse_real(s);
    if (v != std::floor(v) || v < static_cast<double>(std::numeric_limits<T>::min()) || v > 9.007199254740992e15 ||
        v > static_cast<double>(std::numeric_limits<T>::max())) {
      throw CLI::ValidationError("not a valid integer: '" + s + "'");
    }
    return static_cast<T>(v);
  }
}

template <class M>
OptionDef scalar(std::string name, std::string help, M RunConfig::*member) {
  Binder bind = [member](CLI::App& app, RunConfig& cfg, const std::string& flag, const std::string& h) {
    const std::string def = cfg_show(cfg.*member);
    return app
        .add_option_function<std::string>(
            flag, [&cfg, member](const std::string& s) { cfg.*member = parse_item<M>(s); }, h)
        ->default_str(def)
        ->type_name(std::is_same_v<M, double> ? "REAL" : "INT");
  };
  Shower show = [member](const RunConfig& cfg) { return cfg_show(cfg.*member); };
  return {std::move(name), std::move(help), bind, show};
}

OptionDef choice(std::string name, std::string help, std::string RunConfig::*member, std::vector<std::string> allowed) {
  Binder bind = [member, allowed](CLI::App& app, RunConfig& cfg, const std::string& flag, const std::string& h) {
    return app.add_option(flag, cfg.*member, h)->capture_default_str()->check(CLI::IsMember(allowed));
  };
  Shower show = [member](const RunConfig& cfg) { return cfg.*member; };
  return {std::move(name), std::move(help), bind, show};
}

template <class T>
OptionDef list(std::string name, std::string help, std::vector<T> RunConfig::*member) {
  Binder bind = [member](CLI::App& app, RunConfig& cfg, const std::string& flag, const std::string& h) {
    const std::string def = show_list(cfg.*member);
    auto* opt = app.add_option_function<std::string>(
        flag,
        [&cfg, member](const std::string& s) {
          std::vector<T> v;
          for (const auto& item : split(s, ',')) v.push_back(parse_item<T>(item));
          cfg.*member = std::move(v);
        },
        h);
    opt->default_str(def)->type_name("LIST");
    return opt;
  };
  Shower show = [member](const RunConfig& cfg) { return show_list(cfg.*member); };
  return {std::move(name), std::move(help), bind, show};
}

const std::map<std::string, OptionDef>& option_table() {
  static const std::map<std::string, OptionDef> table = [] {
    std::vector<OptionDef> defs = {
        scalar("x", "cutoff x", &RunConfig::x),
        scalar("y", "lower cutoff y", &RunConfig::y),
        scalar("T", "window start T, averages run over [T, 2T]", &RunConfig::T),
        scalar("k", "moment order", &RunConfig::k),
        scalar("K", "number of cumulants", &RunConfig::K),
        scalar("alpha", "N = (log log T)^alpha in the T rule", &RunConfig::alpha),
        scalar("lambda-max", "largest |lambda| of the cumulant grid", &RunConfig::lambda_max),
        scalar("seed", "random seed", &RunConfig::seed),
        scalar("samples", "Monte Carlo sample count", &RunConfig::samples),
        scalar("M", "coefficient vector length", &RunConfig::M),
        scalar("seeds", "number of seeded coefficient draws", &RunConfig::seeds),
        scalar("points", "number of t points", &RunConfig::points),
        list("grid", "x grid", &RunConfig::grid),
        list("T-grid", "T grid", &RunConfig::T_grid),
        list("u-grid", "real argument grid", &RunConfig::u_grid),
        list("h-grid", "level grid", &RunConfig::h_grid),
        list("z-grid", "complex argument grid, items like 1, 0.5i, 1+0.5i", &RunConfig::z_grid),
        list("N-grid", "truncation orders", &RunConfig::N_grid),
        list("V-grid", "combined-bound exponents", &RunConfig::V_grid),
        choice("weight", "weight one|f|g", &RunConfig::weight, {"one", "f", "g"}),
        choice("coef", "coefficients extremal|random", &RunConfig::coef, {"extremal", "random"}),
        scalar("nodes-per-period", "quadrature nodes per period of the fastest term", &RunConfig::nodes_per_period),
        choice("rule", "quadrature rule midpoint|gauss", &RunConfig::rule, {"midpoint", "gauss"}),
        scalar("gauss-points", "Gauss-Legendre nodes per panel", &RunConfig::gauss_points),
        scalar("max-nodes", "quadrature node budget", &RunConfig::max_nodes),
        scalar("limit", "sieve limit, 0 picks the smallest the command needs", &RunConfig::limit),
        choice("format", "output format csv|json", &RunConfig::format, {"csv", "json"}),
    };
    // --z takes a complex value.
    defs.push_back({"z", "complex argument, e.g. 1, 0.5i, 1-0.5i",
                    [](CLI::App& app, RunConfig& cfg, const std::string& flag, const std::string& h) {
                      return app
                          .add_option_function<std::string>(
                              flag, [&cfg](const std::string& s) { cfg.z = parse_complex(s); }, h)
                          ->default_str(format_complex(cfg.z))
                          ->type_name("COMPLEX");
                    },
                    [](const RunConfig& cfg) { return format_complex(cfg.z); }});
    std::map<std::string, OptionDef> out;
    for (auto& d : defs) out.emplace(d.name, std::move(d));
    return out;
  }();
  return table;
}

struct CommandDef {
  std::string help;
  std::vector<std::string> options;
  std::vector<std::string> modes;  // allowed --mode values, first is the default
};

const std::vector<std::string> kQuadrature = {"nodes-per-period", "rule", "gauss-points", "max-nodes"};

const std::map<std::string, CommandDef>& command_table() {
  static const std::map<std::string, CommandDef> table = [] {
    std::map<std::string, CommandDef> t;
    auto with_quad = [](std::vector<std::string> v) {
      v.insert(v.end(), kQuadrature.begin(), kQuadrature.end());
      return v;
    };
    t["sieve"] = {"prime counts and Mertens-type sums up to x", {"x"}, {}};
    t["phi"] = {"partial product Phi at z and cutoff x against the reference limit", {"z", "x", "weight"}, {}};
    t["gamma-f"] = {"weighted Euler constant from the Mertens-type product, extrapolated over a grid",
                    {"grid", "weight"},
                    {}};
    t["moments"] = {"exact model moment E[S^k]", {"x", "k", "weight"}, {"auto", "rational", "real"}};
    t["charfun"] = {"time-averaged characteristic function; mode direct compares with the model, "
                    "theorem1/theorem2 renormalize with x tied to T",
                    with_quad({"x", "T-grid", "z-grid", "weight", "alpha"}),
                    {"direct", "theorem1", "theorem2"}};
    t["cumulants"] = {"model cumulants against log Phi coefficients", {"grid", "K"}, {}};
    t["truncation"] = {"Taylor reconstruction of the model characteristic function", {"x", "u-grid", "N-grid"}, {}};
    t["clt"] = {"CDF discrepancy against the normal law with the smoothing budget",
                {"grid", "samples", "seed", "T"},
                {"mc", "time", "normal"}};
    t["ldp"] = {"scaled cumulant generating function, rate function and Varadhan rows",
                with_quad({"grid", "h-grid", "lambda-max", "samples", "seed", "T"}),
                {"exact", "mc", "time"}};
    t["mv-check"] = {"mean value theorem remainder under T doubling", with_quad({"M", "T-grid", "seeds", "seed"}), {}};
    t["appendix-b"] = {"2k-th mean value bounds for prime sums; mode combined adds the V-grid bound",
                       with_quad({"x", "y", "k", "T-grid", "coef", "seed", "V-grid", "T", "weight"}),
                       {"suite", "combined"}};
    t["sigma-star"] = {"max |Sigma - Sigma*| over a seeded t grid in [T, 2T]", {"x", "weight", "T", "points", "seed"},
                       {}};
    for (auto& [name, def] : t) {
      def.options.push_back("limit");
      def.options.push_back("format");
    }
    return t;
  }();
  return table;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw CLI::ValidationError("empty complex value");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  auto imag_part = [](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    if (t.front() == '+') t.erase(0, 1);
    return parse_real(t);
  };
  if (cut == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(s.substr(0, cut)), imag_part(s.substr(cut))};
}

std::string format_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return format_real(z.real());
  const std::string im = format_real(z.imag()) + "i";
  if (z.real() == 0.0) return im;
  return format_real(z.real()) + (z.imag() < 0 ? "" : "+") + im;
}

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  const auto& cmds = command_table();
  const auto it = cmds.find(command);
  if (it == cmds.end()) throw std::invalid_argument("unknown command " + command);
  if (!it->second.modes.empty()) c.mode = it->second.modes.front();
  if (command == "sieve") {
    c.x = 1e6;
  } else if (command == "phi") {
    c.x = 1000;
  } else if (command == "gamma-f") {
    c.grid = {1e4, 1e5, 1e6, 1e7};
    c.weight = "f";
  } else if (command == "moments") {
    c.x = 3;
    c.k = 2;
  } else if (command == "charfun") {
    c.x = 30;
    c.T_grid = {1e5};
    c.z_grid = {0.5, 1.0, 2.0};
  } else if (command == "cumulants") {
    c.grid = {1e2, 1e4, 1e6};
    c.K = 4;
  } else if (command == "truncation") {
    c.x = 100;
    c.u_grid = {0.5, 1.0, 1.5, 2.0};
    c.N_grid = {2, 4, 8};
  } else if (command == "clt") {
    c.grid = {1e2, 1e4, 1e6};
  } else if (command == "ldp") {
    c.grid = {1e4, 1e5, 1e6};
    c.h_grid = {0.5, 1.0, 1.5};
  } else if (command == "mv-check") {
    c.T_grid = {1e4, 2e4};
  } else if (command == "appendix-b") {
    c.x = 100;
    c.y = 10;
    c.k = 1;
    c.T = 1e4;
    c.T_grid = {1e5, 2e5, 4e5};
    c.V_grid = {1, 2, 3};
    c.weight = "g";
  } else if (command == "sigma-star") {
    c.x = 1e4;
    c.weight = "f";
  }
  return c;
}

ParseOutcome parse_run_config(const std::vector<std::string>& args) {
  CLI::App app{"Numerical experiments on prime sums, Bessel products and their random model", "modprime"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::map<std::string, std::unique_ptr<RunConfig>> configs;
  std::string output;
  unsigned threads = 0;
  const auto& opts = option_table();
  for (const auto& [name, def] : command_table()) {
    auto* sub = app.add_subcommand(name, def.help);
    auto& cfg = *configs.emplace(name, std::make_unique<RunConfig>(defaults_for(name))).first->second;
    for (const auto& o : def.options) {
      const auto& od = opts.at(o);
      od.bind(*sub, cfg, "--" + o, od.help);
    }
    if (!def.modes.empty()) {
      std::string help = "mode";
      for (std::size_t i = 0; i < def.modes.size(); ++i) help += (i ? "|" : " ") + def.modes[i];
      sub->add_option("--mode", cfg.mode, help)->capture_default_str()->check(CLI::IsMember(def.modes));
    }
    sub->add_option("--output,-o", output, "output file, stdout when absent");
    sub->add_option("--threads", threads, "worker cap, 0 uses every core; results do not depend on it")
        ->capture_default_str();
  }

  ParseOutcome outcome;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.status = ParseOutcome::Status::help;
    for (auto* sub : app.get_subcommands()) outcome.message = sub->help();
    if (outcome.message.empty()) outcome.message = app.help();
    return outcome;
  } catch (const CLI::CallForAllHelp&) {
    outcome.status = ParseOutcome::Status::help;
    outcome.message = app.help("", CLI::AppFormatMode::All);
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.status = ParseOutcome::Status::usage_error;
    outcome.message = std::string("error: ") + e.what() + "\n\n" + app.help("", CLI::AppFormatMode::All);
    return outcome;
  }
  const std::string chosen = app.get_subcommands().front()->get_name();
  outcome.config = *configs.at(chosen);
  outcome.config.output = output;
  outcome.config.threads = threads;
  return outcome;
}

std::vector<std::pair<std::string, std::string>> canonical_params(const RunConfig& cfg) {
  const auto& def = command_table().at(cfg.command);
  const auto& opts = option_table();
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& o : def.options) out.emplace_back(o, opts.at(o).show(cfg));
  if (!def.modes.empty()) out.emplace_back("mode", cfg.mode);
  return out;
}

std::vector<std::string> canonical_args(const RunConfig& cfg) {
  std::vector<std::string> out{cfg.command};
  for (const auto& [k, v] : canonical_params(cfg)) {
    out.push_back("--" + k + "=" + v);
  }
  if (!cfg.output.empty()) {
    out.push_back("--output=" + cfg.output);
  }
  if (cfg.threads != 0) {
    out.push_back("--threads=" + std::to_string(cfg.threads));
  }
  return out;
}

std::string canonical_string(const RunConfig& cfg) {
  std::string out;
  for (const auto& a : canonical_args(cfg)) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace modprime::cli
