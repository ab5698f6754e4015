#include "cdvrp/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "cdvrp/errors.hpp"
#include "json.hpp"

namespace cdvrp {

namespace {

using json = nlohmann::ordered_json;

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

enum class Section { kName, kSize, kFleet, kDemands, kCoords, kMatrix };

constexpr std::array<std::pair<std::string_view, Section>, 6> kSections{{
    {"NAME", Section::kName},
    {"SIZE", Section::kSize},
    {"FLEET", Section::kFleet},
    {"DEMANDS", Section::kDemands},
    {"COORDS", Section::kCoords},
    {"MATRIX", Section::kMatrix},
}};

struct SectionBody {
  Token header;
  // Tokens grouped by source line.
  std::vector<std::vector<Token>> lines;

  std::vector<Token> flat() const {
    std::vector<Token> out;
    for (const auto& l : lines) out.insert(out.end(), l.begin(), l.end());
    return out;
  }
};

std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      tokens.push_back({std::string(line.substr(i, j - i)), line_no, i + 1});
      i = j;
    }
    lines.push_back(std::move(tokens));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

bool is_word(const std::string& s) {
  return !s.empty() && std::isalpha(static_cast<unsigned char>(s.front())) && s != "inf" &&
         s != "INF" && s != "Inf";
}

double parse_number(const Token& tok) {
  double value = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (!tok.text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("invalid number '" + tok.text + "'", tok.line, tok.column);
  }
  return value;
}

std::size_t parse_count(const Token& tok) {
  std::size_t value = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("invalid integer '" + tok.text + "'", tok.line, tok.column);
  }
  return value;
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

double round_significant(double x) {
  if (!std::isfinite(x)) return x;
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", x);
  return std::strtod(buf.data(), nullptr);
}

struct ParsedInstance {
  MetricInstance instance;
  // Source positions for validation diagnostics.
  Token size_header;
  std::vector<Token> fleet_lines;
  std::vector<Token> demand_tokens;
  std::vector<Token> coord_tokens;  // one per vertex (its x)
  std::map<std::pair<std::size_t, std::size_t>, Token> matrix_tokens;
  bool from_matrix = false;
};

ParsedInstance parse_structure(std::string_view text) {
  std::map<Section, SectionBody> sections;
  std::optional<Section> current;
  std::size_t last_line = 0;

  for (auto& tokens : tokenize(text)) {
    if (tokens.empty()) continue;
    last_line = tokens.front().line;
    if (is_word(tokens.front().text)) {
      const Token& head = tokens.front();
      const auto it = std::find_if(kSections.begin(), kSections.end(),
                                   [&](const auto& s) { return s.first == head.text; });
      if (it == kSections.end()) {
        throw ParseError("unknown section '" + head.text + "'", head.line, head.column);
      }
      if (sections.contains(it->second)) {
        throw ParseError("duplicate section '" + head.text + "'", head.line, head.column);
      }
      current = it->second;
      SectionBody body{head, {}};
      tokens.erase(tokens.begin());
      if (!tokens.empty()) body.lines.push_back(std::move(tokens));
      sections.emplace(*current, std::move(body));
      continue;
    }
    if (!current) {
      throw ParseError("data before any section", tokens.front().line, tokens.front().column);
    }
    sections[*current].lines.push_back(std::move(tokens));
  }

  auto require = [&](Section s, std::string_view name) -> const SectionBody& {
    const auto it = sections.find(s);
    if (it == sections.end()) {
      throw ParseError("missing section " + std::string(name), last_line + 1, 1);
    }
    return it->second;
  };

  std::string name = "unnamed";
  if (const auto it = sections.find(Section::kName); it != sections.end()) {
    std::string joined;
    for (const auto& t : it->second.flat()) joined += (joined.empty() ? "" : " ") + t.text;
    if (!joined.empty()) name = joined;
  }

  const SectionBody& size_sec = require(Section::kSize, "SIZE");
  const auto size_tokens = size_sec.flat();
  if (size_tokens.size() != 1) {
    throw ParseError("SIZE expects exactly one value", size_sec.header.line,
                     size_sec.header.column);
  }
  const std::size_t n = parse_count(size_tokens.front());
  if (n == 0) {
    throw ParseError("SIZE must be at least 1", size_tokens.front().line,
                     size_tokens.front().column);
  }

  const SectionBody& fleet_sec = require(Section::kFleet, "FLEET");
  std::vector<VehicleClass> classes;
  std::vector<Token> fleet_lines;
  for (const auto& line : fleet_sec.lines) {
    const Token& first = line.front();
    if (line.size() < 3 || line.size() > 4) {
      throw ParseError("fleet line expects 'class Q T [multiplicity|inf]'", first.line,
                       first.column);
    }
    if (parse_count(line[0]) != classes.size()) {
      throw ParseError("fleet classes must be numbered 0, 1, ... in order", first.line,
                       first.column);
    }
    VehicleClass cls;
    cls.capacity = parse_number(line[1]);
    cls.distance_bound = parse_number(line[2]);
    if (line.size() == 4 && line[3].text != "inf") {
      cls.multiplicity = parse_count(line[3]);
      if (*cls.multiplicity == 0) {
        throw ParseError("multiplicity must be positive", line[3].line, line[3].column);
      }
    }
    classes.push_back(cls);
    fleet_lines.push_back(first);
  }
  if (classes.empty()) {
    throw ParseError("FLEET lists no vehicle class", fleet_sec.header.line,
                     fleet_sec.header.column);
  }

  const SectionBody& demand_sec = require(Section::kDemands, "DEMANDS");
  const auto demand_tokens = demand_sec.flat();
  if (demand_tokens.size() != n) {
    throw ParseError("DEMANDS has " + std::to_string(demand_tokens.size()) +
                         " values, expected " + std::to_string(n),
                     demand_sec.header.line, demand_sec.header.column);
  }
  std::vector<double> demand;
  for (const auto& t : demand_tokens) demand.push_back(parse_number(t));

  const bool has_coords = sections.contains(Section::kCoords);
  const bool has_matrix = sections.contains(Section::kMatrix);
  if (has_coords == has_matrix) {
    const std::size_t line = has_coords ? sections[Section::kMatrix].header.line : last_line + 1;
    throw ParseError("exactly one of COORDS or MATRIX is required", line, 1);
  }

  FleetSpec fleet(std::move(classes));
  if (has_coords) {
    const SectionBody& sec = sections[Section::kCoords];
    const auto tokens = sec.flat();
    if (tokens.size() != 2 * n) {
      throw ParseError("COORDS has " + std::to_string(tokens.size()) + " values, expected " +
                           std::to_string(2 * n),
                       sec.header.line, sec.header.column);
    }
    std::vector<Point> points;
    std::vector<Token> coord_tokens;
    for (std::size_t i = 0; i < n; ++i) {
      points.push_back({parse_number(tokens[2 * i]), parse_number(tokens[2 * i + 1])});
      coord_tokens.push_back(tokens[2 * i]);
    }
    return ParsedInstance{euclidean_instance(points, std::move(demand), std::move(fleet), name),
                          size_sec.header,
                          std::move(fleet_lines),
                          demand_tokens,
                          std::move(coord_tokens),
                          {},
                          false};
  }

  const SectionBody& sec = sections[Section::kMatrix];
  const auto tokens = sec.flat();
  if (tokens.size() != n * (n - 1) / 2) {
    throw ParseError("MATRIX has " + std::to_string(tokens.size()) +
                         " values, expected a strict lower triangle of " +
                         std::to_string(n * (n - 1) / 2),
                     sec.header.line, sec.header.column);
  }
  std::vector<double> dist(n * n, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, Token> positions;
  std::size_t next = 0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Token& t = tokens[next++];
      const double d = parse_number(t);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
      positions.emplace(std::make_pair(j, i), t);
    }
  }
  return ParsedInstance{
      MetricInstance(name, n, std::move(dist), std::move(demand), std::move(fleet)),
      size_sec.header,
      std::move(fleet_lines),
      demand_tokens,
      {},
      std::move(positions),
      true};
}

// Where in the source a validation violation should be reported.
Token locate(const ParsedInstance& parsed, const Violation& v) {
  auto matrix_entry = [&](std::size_t a, std::size_t b) -> std::optional<Token> {
    const auto it = parsed.matrix_tokens.find({std::min(a, b), std::max(a, b)});
    if (it == parsed.matrix_tokens.end()) return std::nullopt;
    return it->second;
  };
  auto vertex_entry = [&](std::size_t vertex) -> Token {
    if (!parsed.from_matrix && vertex < parsed.coord_tokens.size()) {
      return parsed.coord_tokens[vertex];
    }
    if (auto t = matrix_entry(kDepot, vertex)) return *t;
    return parsed.size_header;
  };

  switch (v.kind) {
    case ViolationKind::kTriangle:
      if (auto t = matrix_entry(v.witness[0], v.witness[2])) return *t;
      return vertex_entry(v.witness[0]);
    case ViolationKind::kNegative:
      if (auto t = matrix_entry(v.witness[0], v.witness[1])) return *t;
      return parsed.size_header;
    case ViolationKind::kDemandSign:
    case ViolationKind::kDepotDemand:
      return parsed.demand_tokens[v.witness[0]];
    case ViolationKind::kFleet:
      return parsed.fleet_lines[v.witness[0]];
    case ViolationKind::kRadius:
      return vertex_entry(v.witness[0]);
    case ViolationKind::kDiagonal:
    case ViolationKind::kSymmetry:
      break;
  }
  return parsed.size_header;
}

json meta_to_json(const MetaValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return round_significant(v);
        } else {
          return v;
        }
      },
      value);
}

[[noreturn]] void json_error(std::string_view text, std::size_t byte, const std::string& what) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ParseError(what, line, column);
}

}  // namespace

MetricInstance parse_instance_unchecked(std::string_view text) {
  return parse_structure(text).instance;
}

MetricInstance parse_instance(std::string_view text) {
  ParsedInstance parsed = parse_structure(text);
  const ValidationReport report = validate_instance(parsed.instance);
  if (!report.ok()) {
    const Violation& first = report.violations.front();
    const Token at = locate(parsed, first);
    throw ParseError("validation failed: " + describe(first), at.line, at.column);
  }
  return std::move(parsed.instance);
}

std::string write_instance(const MetricInstance& inst) {
  std::ostringstream out;
  const std::size_t n = inst.size();
  out << "NAME " << (inst.name().empty() ? "unnamed" : inst.name()) << "\n";
  out << "SIZE " << n << "\n";
  out << "FLEET\n";
  for (std::size_t c = 0; c < inst.fleet().size(); ++c) {
    const auto& cls = inst.fleet()[c];
    out << c << " " << format_number(cls.capacity) << " " << format_number(cls.distance_bound)
        << " " << (cls.multiplicity ? std::to_string(*cls.multiplicity) : "inf") << "\n";
  }
  out << "DEMANDS\n";
  for (std::size_t v = 0; v < n; ++v) out << (v ? " " : "") << format_number(inst.demand(v));
  out << "\n";
  if (inst.coordinates()) {
    out << "COORDS\n";
    for (const auto& p : *inst.coordinates()) {
      out << format_number(p.x) << " " << format_number(p.y) << "\n";
    }
  } else {
    out << "MATRIX\n";
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) out << (j ? " " : "") << format_number(inst.distance(i, j));
      out << "\n";
    }
  }
  return out.str();
}

std::string write_solution(const RoutingSolution& sol, const MetricInstance& inst) {
  json doc;
  doc["algorithm"] = sol.algorithm;
  json params = json::object();
  for (const auto& [key, value] : sol.parameters) params[key] = round_significant(value);
  doc["parameters"] = std::move(params);
  json tours = json::array();
  for (const auto& t : sol.tours) {
    const Tour fresh = make_tour(inst, t.tour.seq);
    json entry;
    entry["class"] = t.class_id;
    entry["sequence"] = t.tour.seq;
    entry["length"] = round_significant(fresh.length);
    entry["load"] = round_significant(fresh.load);
    tours.push_back(std::move(entry));
  }
  doc["tours"] = std::move(tours);
  doc["pi"] = sol.pi;
  doc["alpha"] = round_significant(sol.alpha);
  json meta = json::object();
  for (const auto& [key, value] : sol.meta) meta[key] = meta_to_json(value);
  doc["meta"] = std::move(meta);
  return doc.dump(2) + "\n";
}

RoutingSolution parse_solution(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    json_error(text, e.byte == 0 ? 0 : e.byte - 1, e.what());
  }
  try {
    RoutingSolution sol;
    sol.algorithm = doc.at("algorithm").get<std::string>();
    for (const auto& [key, value] : doc.at("parameters").items()) {
      sol.parameters[key] = value.get<double>();
    }
    for (const auto& entry : doc.at("tours")) {
      AssignedTour t;
      t.class_id = entry.at("class").get<std::size_t>();
      t.tour.seq = entry.at("sequence").get<std::vector<VertexId>>();
      t.tour.length = entry.at("length").get<double>();
      t.tour.load = entry.at("load").get<double>();
      sol.tours.push_back(std::move(t));
    }
    sol.pi = doc.at("pi").get<std::size_t>();
    sol.alpha = doc.at("alpha").get<double>();
    if (doc.contains("meta")) {
      for (const auto& [key, value] : doc.at("meta").items()) {
        if (value.is_boolean()) {
          sol.meta[key] = value.get<bool>();
        } else if (value.is_number_integer()) {
          sol.meta[key] = value.get<std::int64_t>();
        } else if (value.is_number()) {
          sol.meta[key] = value.get<double>();
        } else if (value.is_string()) {
          sol.meta[key] = value.get<std::string>();
        } else {
          throw ParseError("meta field '" + key + "' must be a scalar", 1, 1);
        }
      }
    }
    return sol;
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution document: ") + e.what(), 1, 1);
  }
}

}  // namespace cdvrp
