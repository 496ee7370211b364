#include "nonlocal/io.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <sstream>

#include "nonlocal/bell.hpp"
#include "nonlocal/correlations.hpp"

namespace nonlocal {

using nlohmann::json;

namespace {

ConditionalBox checked(const ConditionalBox& box, double tol) {
  const ValidationReport report = validate_box(box, tol);
  if (!report.valid) {
    std::ostringstream msg;
    msg << "box violates " << report.violations.size()
        << " constraint(s), first: " << report.violations.front().constraint;
    throw std::invalid_argument(msg.str());
  }
  return box;
}

int parse_outcome(const std::string& token) {
  if (token == "+1" || token == "1") return +1;
  if (token == "-1") return -1;
  throw ParseError("outcome must be +1 or -1, got '" + token + "'");
}

std::string format_probability(double p) {
  std::ostringstream out;
  out << std::setprecision(17) << p;
  return out.str();
}

}  // namespace

ConditionalBox read_box_flat(std::istream& in) {
  std::array<double, 16> p{};
  std::array<bool, 16> seen{};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int x, y;
    std::string a_tok, b_tok;
    double prob;
    if (!(fields >> x)) continue;  // blank line
    if (!(fields >> y >> a_tok >> b_tok >> prob)) {
      throw ParseError("malformed record: '" + line + "'");
    }
    if ((x != 0 && x != 1) || (y != 0 && y != 1)) {
      throw ParseError("inputs must be bits in record: '" + line + "'");
    }
    const std::size_t idx =
        ConditionalBox::index(x, y, parse_outcome(a_tok), parse_outcome(b_tok));
    if (seen[idx]) throw ParseError("duplicate record: '" + line + "'");
    seen[idx] = true;
    p[idx] = prob;
  }
  for (bool s : seen) {
    if (!s) throw ParseError("box file does not cover all 16 entries");
  }
  return ConditionalBox::from_probabilities(p);
}

std::string write_box_flat(const ConditionalBox& box) {
  std::ostringstream out;
  out << "# conditional box p(a,b|x,y): x y a b p\n";
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int as = 0; as < 2; ++as) {
        for (int bs = 0; bs < 2; ++bs) {
          const int a = slot_outcome(as);
          const int b = slot_outcome(bs);
          out << x << ' ' << y << ' ' << (a > 0 ? "+1" : "-1") << ' '
              << (b > 0 ? "+1" : "-1") << ' '
              << format_probability(box.prob(x, y, a, b)) << '\n';
        }
      }
    }
  }
  return out.str();
}

namespace {

const char* setting_key(int x, int y) {
  static const char* keys[4] = {"x0y0", "x0y1", "x1y0", "x1y1"};
  return keys[2 * x + y];
}

const char* pair_key(int a, int b) {
  if (a > 0) return b > 0 ? "++" : "+-";
  return b > 0 ? "-+" : "--";
}

}  // namespace

ConditionalBox read_box_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probabilities")) {
    throw ParseError("box JSON must be an object with a 'probabilities' key");
  }
  const json& probs = doc["probabilities"];
  std::array<double, 16> p{};
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::string skey = setting_key(x, y);
      if (!probs.contains(skey)) {
        throw ParseError("missing setting '" + skey + "'");
      }
      for (int as = 0; as < 2; ++as) {
        for (int bs = 0; bs < 2; ++bs) {
          const int a = slot_outcome(as);
          const int b = slot_outcome(bs);
          const std::string pkey = pair_key(a, b);
          if (!probs[skey].contains(pkey)) {
            throw ParseError("missing outcome pair '" + pkey +
                             "' under setting '" + skey + "'");
          }
          if (!probs[skey][pkey].is_number()) {
            throw ParseError("probability at " + skey + "/" + pkey +
                             " is not a number");
          }
          p[ConditionalBox::index(x, y, a, b)] =
              probs[skey][pkey].get<double>();
        }
      }
    }
  }
  return ConditionalBox::from_probabilities(p);
}

std::string write_box_json(const ConditionalBox& box) {
  json probs = json::object();
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      json setting = json::object();
      for (int as = 0; as < 2; ++as) {
        for (int bs = 0; bs < 2; ++bs) {
          const int a = slot_outcome(as);
          const int b = slot_outcome(bs);
          setting[pair_key(a, b)] = box.prob(x, y, a, b);
        }
      }
      probs[setting_key(x, y)] = setting;
    }
  }
  json doc = {{"format", "conditional-box"}, {"probabilities", probs}};
  return doc.dump(2) + "\n";
}

bool is_builtin_box(std::string_view name) {
  if (name == "pr" || name == "uniform" || name == "quantum-2sqrt2") {
    return true;
  }
  if (name.size() == 8 && name.rfind("det-", 0) == 0) {
    for (char c : name.substr(4)) {
      if (c != '0' && c != '1') return false;
    }
    return true;
  }
  return false;
}

ConditionalBox builtin_box(std::string_view name) {
  if (name == "pr") return ConditionalBox::pr();
  if (name == "uniform") return ConditionalBox::uniform();
  if (name == "quantum-2sqrt2") {
    return box_at_angles(CorrelationModel::quantum(),
                         AxisConfiguration::spaced(std::numbers::pi / 4.0));
  }
  if (is_builtin_box(name)) {
    int code = 0;
    for (char c : name.substr(4)) code = code * 2 + (c - '0');
    return deterministic_vertices()[code];
  }
  throw ParseError("unknown builtin box: " + std::string(name));
}

ConditionalBox load_box(const std::string& name_or_path, double tol,
                        bool validate) {
  if (is_builtin_box(name_or_path)) return builtin_box(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw ParseError("cannot open box file: " + name_or_path);
  int first = in.peek();
  while (first != EOF && std::isspace(first)) {
    in.get();
    first = in.peek();
  }
  const ConditionalBox box =
      first == '{' ? read_box_json(in) : read_box_flat(in);
  return validate ? checked(box, tol) : box;
}

namespace {

SpacetimeEvent parse_event(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_object() ||
      !doc[key].contains("t") || !doc[key].contains("x")) {
    throw ParseError("scenario event '" + key +
                     "' must be an object with 't' and 'x'");
  }
  return {doc[key]["t"].get<double>(), doc[key]["x"].get<double>()};
}

ConditionalBox parse_box_ref(const json& doc, const std::string& key,
                             double tol) {
  if (!doc.contains(key)) {
    throw ParseError("scenario is missing '" + key + "'");
  }
  const json& ref = doc[key];
  if (ref.is_string()) {
    return load_box(ref.get<std::string>(), tol);
  }
  if (ref.is_object() && ref.contains("path")) {
    return load_box(ref["path"].get<std::string>(), tol);
  }
  throw ParseError("'" + key + "' must be a builtin name, a path string, or "
                   "{\"path\": ...}");
}

}  // namespace

ScenarioFile read_scenario(std::istream& in, double tol) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("events")) {
    throw ParseError("scenario must be an object with an 'events' key");
  }
  ScenarioFile file;
  file.scenario.event_a = parse_event(doc["events"], "a");
  file.scenario.event_b = parse_event(doc["events"], "b");
  file.scenario.event_j = parse_event(doc["events"], "j");
  file.scenario.box_off = parse_box_ref(doc, "box_off", tol);
  file.scenario.box_on = parse_box_ref(doc, "box_on", tol);
  file.schedule = ButtonSchedule::parse(
      doc.value("schedule", std::string("none")));
  return file;
}

ScenarioFile load_scenario(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  return read_scenario(in, tol);
}

}  // namespace nonlocal
