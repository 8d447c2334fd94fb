#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "dttp/instance.hpp"

namespace dttp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line);
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct LineReader {
  std::istream& in;
  int line_no = 0;
  /// Next non-blank line, trimmed; nullopt at end of stream.
  std::optional<std::string> next() {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string t = trim(raw);
      if (!t.empty()) return t;
    }
    return std::nullopt;
  }
};

}  // namespace

TtpInstance parse_instance(std::istream& in) {
  LineReader reader{in};
  std::string name;
  std::optional<int> dimension, n_items;
  std::optional<double> capacity, v_min, v_max, drop_rate, stored_c;
  int stored_c_line = 0;

  // Header: "KEY: value" lines until NODE_COORD_SECTION.
  while (true) {
    auto line = reader.next();
    if (!line) throw ParseError("missing NODE_COORD_SECTION", reader.line_no);
    if (*line == "NODE_COORD_SECTION") break;
    const auto colon = line->find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'KEY: value' header line", reader.line_no);
    const std::string key = trim(line->substr(0, colon));
    const std::string value = trim(line->substr(colon + 1));
    if (key == "PROBLEM NAME") {
      name = value;
    } else if (key == "DIMENSION") {
      dimension = parse_int(value, reader.line_no);
    } else if (key == "NUMBER OF ITEMS") {
      n_items = parse_int(value, reader.line_no);
    } else if (key == "CAPACITY OF KNAPSACK") {
      capacity = parse_double(value, reader.line_no);
    } else if (key == "MIN SPEED") {
      v_min = parse_double(value, reader.line_no);
    } else if (key == "MAX SPEED") {
      v_max = parse_double(value, reader.line_no);
    } else if (key == "DROP RATE") {
      drop_rate = parse_double(value, reader.line_no);
    } else if (key == "DROP CONSTANT") {
      stored_c = parse_double(value, reader.line_no);
      stored_c_line = reader.line_no;
    } else {
      throw ParseError("unknown header key '" + key + "'", reader.line_no);
    }
  }
  if (!dimension) throw ParseError("missing DIMENSION header", reader.line_no);
  if (!n_items) throw ParseError("missing NUMBER OF ITEMS header", reader.line_no);
  if (!capacity) throw ParseError("missing CAPACITY OF KNAPSACK header", reader.line_no);
  if (!v_min) throw ParseError("missing MIN SPEED header", reader.line_no);
  if (!v_max) throw ParseError("missing MAX SPEED header", reader.line_no);
  if (!drop_rate) throw ParseError("missing DROP RATE header", reader.line_no);

  std::vector<City> cities;
  cities.reserve(*dimension);
  for (int i = 0; i < *dimension; ++i) {
    auto line = reader.next();
    if (!line) throw ParseError("unexpected end of file in NODE_COORD_SECTION", reader.line_no);
    if (*line == "ITEMS SECTION")
      throw ParseError("DIMENSION disagrees with the coordinate row count", reader.line_no);
    const auto toks = split_ws(*line);
    if (toks.size() != 3)
      throw ParseError("coordinate row must be 'id x y'", reader.line_no);
    cities.push_back(City{parse_int(toks[0], reader.line_no),
                          parse_double(toks[1], reader.line_no),
                          parse_double(toks[2], reader.line_no)});
  }

  {
    auto line = reader.next();
    if (!line || *line != "ITEMS SECTION")
      throw ParseError("missing ITEMS SECTION (or DIMENSION disagrees with the coordinate row count)",
                       reader.line_no);
  }

  std::vector<Item> items;
  items.reserve(*n_items);
  for (int i = 0; i < *n_items; ++i) {
    auto line = reader.next();
    if (!line) throw ParseError("unexpected end of file in ITEMS SECTION", reader.line_no);
    if (*line == "EOF")
      throw ParseError("NUMBER OF ITEMS disagrees with the item row count", reader.line_no);
    const auto toks = split_ws(*line);
    if (toks.size() != 4)
      throw ParseError("item row must be 'id profit weight city'", reader.line_no);
    Item it{parse_int(toks[0], reader.line_no), parse_double(toks[1], reader.line_no),
            parse_double(toks[2], reader.line_no), parse_int(toks[3], reader.line_no)};
    if (it.city < 1 || it.city > *dimension)
      throw ParseError("item references unknown city " + std::to_string(it.city),
                       reader.line_no);
    items.push_back(it);
  }

  {
    auto line = reader.next();
    if (!line || *line != "EOF")
      throw ParseError("missing EOF terminator", reader.line_no);
  }

  TtpInstance inst = TtpInstance::create(name, std::move(cities), std::move(items),
                                         *capacity, *v_min, *v_max, *drop_rate);
  if (stored_c && std::abs(*stored_c - inst.drop_constant()) > 1e-9)
    throw ParseError("stored DROP CONSTANT " + fmt12(*stored_c) +
                         " disagrees with recomputed value " + fmt12(inst.drop_constant()),
                     stored_c_line);
  return inst;
}

void print_instance(const TtpInstance& inst, std::ostream& out) {
  out << "PROBLEM NAME: " << inst.name() << "\n";
  out << "DIMENSION: " << inst.n_cities() << "\n";
  out << "NUMBER OF ITEMS: " << inst.n_items() << "\n";
  out << "CAPACITY OF KNAPSACK: " << fmt12(inst.capacity()) << "\n";
  out << "MIN SPEED: " << fmt12(inst.min_speed()) << "\n";
  out << "MAX SPEED: " << fmt12(inst.max_speed()) << "\n";
  out << "DROP RATE: " << fmt12(inst.drop_rate()) << "\n";
  out << "DROP CONSTANT: " << fmt12(inst.drop_constant()) << "\n";
  out << "NODE_COORD_SECTION\n";
  for (const City& c : inst.cities())
    out << c.id << " " << fmt12(c.x) << " " << fmt12(c.y) << "\n";
  out << "ITEMS SECTION\n";
  for (const Item& it : inst.items())
    out << it.id << " " << fmt12(it.profit) << " " << fmt12(it.weight) << " "
        << it.city << "\n";
  out << "EOF\n";
}

TtpInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file " + path.string());
  return parse_instance(in);
}

void write_instance(const TtpInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file " + path.string());
  print_instance(inst, out);
  if (!out) throw Error("failed writing instance file " + path.string());
}

}  // namespace dttp
