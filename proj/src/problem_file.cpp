#include "posorbit/problem_file.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace posorbit {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int column = 0;  // column of the first value character
};

constexpr std::string_view kRequired[] = {"omega", "p", "q", "b", "c", "e", "rho1", "rho2"};
constexpr std::string_view kOptional[] = {"name", "a1", "guess_x0", "guess_v0", "tol", "dmax_reported"};

bool known_key(std::string_view k) {
  for (auto r : kRequired)
    if (r == k) return true;
  for (auto o : kOptional)
    if (o == k) return true;
  return false;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Expr parse_at(const Entry& e) {
  try {
    return parse_expr(e.value);
  } catch (const ParseError& err) {
    throw ProblemFileError(err.message(), e.line, e.column + static_cast<int>(err.position()));
  }
}

double constant_at(const Entry& e, std::string_view key) {
  const auto v = parse_at(e).constant_value();
  if (!v || !std::isfinite(*v)) throw ProblemFileError(std::string(key) + " must be a finite constant", e.line, e.column);
  return *v;
}

PeriodicCoeff coeff_at(const Entry& e, std::string_view key, double omega) {
  try {
    return PeriodicCoeff(parse_at(e), omega);
  } catch (const ProblemFileError&) {
    throw;
  } catch (const std::exception& err) {
    throw ProblemFileError(std::string(key) + ": " + err.what(), e.line, e.column);
  }
}

}  // namespace

ProblemFileError::ProblemFileError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message
                                  : message),
      message_(message),
      line_(line),
      column_(column) {}

ProblemFile parse_problem(std::string_view text, const std::string& default_name) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ProblemFileError("expected key = value", line_no, static_cast<int>(i) + 1);
    std::size_t key_end = eq;
    while (key_end > i && is_space(line[key_end - 1])) --key_end;
    const std::string key(line.substr(i, key_end - i));
    if (key.empty()) throw ProblemFileError("missing key before '='", line_no, static_cast<int>(eq) + 1);
    if (!known_key(key)) throw ProblemFileError("unknown key '" + key + "'", line_no, static_cast<int>(i) + 1);
    if (entries.contains(key)) throw ProblemFileError("duplicate key '" + key + "'", line_no, static_cast<int>(i) + 1);
    std::size_t v = eq + 1;
    while (v < line.size() && is_space(line[v])) ++v;
    std::size_t v_end = line.size();
    while (v_end > v && is_space(line[v_end - 1])) --v_end;
    if (v == v_end) throw ProblemFileError("empty value for '" + key + "'", line_no, static_cast<int>(eq) + 2);
    entries.emplace(key, Entry{std::string(line.substr(v, v_end - v)), line_no, static_cast<int>(v) + 1});
    if (end == text.size()) break;
  }
  // Syntax errors come first, in file order, so they point at a line.
  std::vector<const Entry*> by_line;
  for (const auto& [k, e] : entries)
    if (k != "name") by_line.push_back(&e);
  std::ranges::sort(by_line, {}, &Entry::line);
  for (const Entry* e : by_line) parse_at(*e);

  for (auto k : kRequired) {
    if (!entries.contains(k)) throw ProblemFileError("missing required key '" + std::string(k) + "'", 0, 0);
  }
  auto at = [&](std::string_view k) -> const Entry& { return entries.find(k)->second; };
  auto opt_constant = [&](std::string_view k) -> std::optional<double> {
    auto it = entries.find(k);
    if (it == entries.end()) return std::nullopt;
    return constant_at(it->second, k);
  };

  const double omega = constant_at(at("omega"), "omega");
  if (!(omega > 0.0)) throw ProblemFileError("omega must be positive", at("omega").line, at("omega").column);
  const double rho1 = constant_at(at("rho1"), "rho1");
  const double rho2 = constant_at(at("rho2"), "rho2");
  if (!(rho1 > 0.0)) throw ProblemFileError("rho1 must be positive", at("rho1").line, at("rho1").column);
  if (!(rho2 > 0.0)) throw ProblemFileError("rho2 must be positive", at("rho2").line, at("rho2").column);

  std::optional<PeriodicCoeff> a1;
  if (auto it = entries.find("a1"); it != entries.end()) a1 = coeff_at(it->second, "a1", omega);

  ProblemFile file{
      .spec =
          ProblemSpec{
              .name = entries.contains("name") ? at("name").value : default_name,
              .p = coeff_at(at("p"), "p", omega),
              .q = coeff_at(at("q"), "q", omega),
              .b = coeff_at(at("b"), "b", omega),
              .c = coeff_at(at("c"), "c", omega),
              .e = coeff_at(at("e"), "e", omega),
              .rho1 = rho1,
              .rho2 = rho2,
              .omega = omega,
              .a1 = a1,
              .dmax_reported = opt_constant("dmax_reported"),
          },
      .guess_x0 = opt_constant("guess_x0"),
      .guess_v0 = opt_constant("guess_v0"),
      .tol = opt_constant("tol"),
  };
  if (file.tol && !(*file.tol > 0.0)) throw ProblemFileError("tol must be positive", at("tol").line, at("tol").column);
  try {
    validate(file.spec);
  } catch (const ValidationError& err) {
    // Tag the offending coefficient when the message names one.
    const std::string msg = err.what();
    for (auto k : {"c", "e"}) {
      if (msg.rfind(std::string(k) + " ", 0) == 0) throw ProblemFileError(msg, at(k).line, at(k).column);
    }
    throw ProblemFileError(msg, 0, 0);
  }
  return file;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_problem(ss.str(), stem);
}

std::uint64_t spec_hash(const ProblemSpec& spec) {
  std::string canon;
  canon += "omega=" + format17(spec.omega) + "\n";
  canon += "p=" + spec.p.expr().to_string() + "\n";
  canon += "q=" + spec.q.expr().to_string() + "\n";
  canon += "b=" + spec.b.expr().to_string() + "\n";
  canon += "c=" + spec.c.expr().to_string() + "\n";
  canon += "e=" + spec.e.expr().to_string() + "\n";
  canon += "rho1=" + format17(spec.rho1) + "\n";
  canon += "rho2=" + format17(spec.rho2) + "\n";
  if (spec.a1) canon += "a1=" + spec.a1->expr().to_string() + "\n";
  if (spec.dmax_reported) canon += "dmax_reported=" + format17(*spec.dmax_reported) + "\n";
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace posorbit
