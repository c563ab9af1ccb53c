#include "carbofront/scenario_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace carbofront {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string buf(trim(text));
  if (buf.empty()) throw ParseError("missing value for key '" + std::string(key) + "'");
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ParseError("bad number '" + buf + "' for key '" + std::string(key) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::string buf(trim(text));
  if (!buf.empty() && buf.front() == '[' && buf.back() == ']') {
    buf = buf.substr(1, buf.size() - 2);
  }
  for (char& c : buf) {
    if (c == ',') c = ' ';
  }
  std::vector<double> values;
  std::istringstream in(buf);
  std::string token;
  while (in >> token) values.push_back(parse_double(key, token));
  if (values.empty()) {
    throw ParseError("empty list for key '" + std::string(key) + "'");
  }
  return values;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

struct Parser {
  Scenario scenario;
  bool c_phi_given = false;

  void set(std::string_view key, std::string_view value) {
    Scenario& sc = scenario;
    if (key == "kappa0") sc.params.kappa0 = parse_double(key, value);
    else if (key == "kappa1") sc.params.kappa1 = parse_double(key, value);
    else if (key == "kappa2") sc.params.kappa2 = parse_double(key, value);
    else if (key == "gamma") sc.params.gamma = parse_double(key, value);
    else if (key == "p") sc.p = parse_double(key, value);
    else if (key == "phi.a") sc.phi.a = parse_double(key, value);
    else if (key == "phi.b") sc.phi.b = parse_double(key, value);
    else if (key == "phi.q") sc.phi.q = parse_double(key, value);
    else if (key == "phi.c") {
      sc.phi.c_phi = parse_double(key, value);
      c_phi_given = true;
    } else if (key == "phi.table.r[]") {
      sc.phi.table_r = parse_list(key, value);
      sc.phi.family = PhiFamily::tabulated;
    } else if (key == "phi.table.phi[]") {
      sc.phi.table_phi = parse_list(key, value);
      sc.phi.family = PhiFamily::tabulated;
    }
    else if (key == "g.cinf") sc.boundary.g.cinf = parse_double(key, value);
    else if (key == "g.amp") sc.boundary.g.amp = parse_double(key, value);
    else if (key == "g.lambda") sc.boundary.g.lambda = parse_double(key, value);
    else if (key == "h.cinf") sc.boundary.h.cinf = parse_double(key, value);
    else if (key == "h.amp") sc.boundary.h.amp = parse_double(key, value);
    else if (key == "h.lambda") sc.boundary.h.lambda = parse_double(key, value);
    else if (key == "s0") sc.initial.s0 = parse_double(key, value);
    else if (key == "u0[]") sc.initial.u0 = parse_list(key, value);
    else if (key == "v0[]") sc.initial.v0 = parse_list(key, value);
    else if (key == "m") sc.truncation_m = parse_double(key, value);
    else throw ParseError("unknown scenario key '" + std::string(key) + "'");
  }

  Scenario finish() {
    if (!c_phi_given && scenario.phi.family == PhiFamily::power_law) {
      scenario.phi.c_phi = scenario.phi.b;
    }
    return scenario;
  }
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Parser parser;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    parser.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return parser.finish();
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "kappa0 = " << format_double(sc.params.kappa0) << '\n'
      << "kappa1 = " << format_double(sc.params.kappa1) << '\n'
      << "kappa2 = " << format_double(sc.params.kappa2) << '\n'
      << "gamma = " << format_double(sc.params.gamma) << '\n'
      << "p = " << format_double(sc.p) << '\n';
  if (sc.phi.family == PhiFamily::power_law) {
    out << "phi.a = " << format_double(sc.phi.a) << '\n'
        << "phi.b = " << format_double(sc.phi.b) << '\n';
  } else {
    out << "phi.table.r[] = " << format_list(sc.phi.table_r) << '\n'
        << "phi.table.phi[] = " << format_list(sc.phi.table_phi) << '\n';
  }
  out << "phi.q = " << format_double(sc.phi.q) << '\n'
      << "phi.c = " << format_double(sc.phi.c_phi) << '\n'
      << "g.cinf = " << format_double(sc.boundary.g.cinf) << '\n'
      << "g.amp = " << format_double(sc.boundary.g.amp) << '\n'
      << "g.lambda = " << format_double(sc.boundary.g.lambda) << '\n'
      << "h.cinf = " << format_double(sc.boundary.h.cinf) << '\n'
      << "h.amp = " << format_double(sc.boundary.h.amp) << '\n'
      << "h.lambda = " << format_double(sc.boundary.h.lambda) << '\n'
      << "s0 = " << format_double(sc.initial.s0) << '\n'
      << "u0[] = " << format_list(sc.initial.u0) << '\n'
      << "v0[] = " << format_list(sc.initial.v0) << '\n';
  if (sc.truncation_m) out << "m = " << format_double(*sc.truncation_m) << '\n';
  return out.str();
}

void apply_override(Scenario& scenario, std::string_view key,
                    std::string_view value) {
  Parser parser;
  parser.scenario = scenario;
  parser.c_phi_given = true;  // an explicit phi.b override re-derives c_phi below
  parser.set(trim(key), value);
  if (trim(key) == "phi.b" && scenario.phi.family == PhiFamily::power_law &&
      scenario.phi.c_phi == scenario.phi.b) {
    parser.scenario.phi.c_phi = parser.scenario.phi.b;
  }
  scenario = parser.scenario;
}

}  // namespace carbofront
