#pragma once

// CPLEX-style LP text for MatrixModel.
//
//   \ comment
//   Minimize
//    obj: 1 m_0_1 + 1 m_0_2
//   Subject To
//    cap_1: 1 m_0_1 + 1 m_1_1 <= 3
//   Bounds
//    0 <= u_0_1 <= 80
//    a_0_1_0 = 1
//   Binaries
//    a_0_1_0
//   End
//
// Coefficients are written in shortest round-trip form, so parse_lp(emit_lp(m))
// reproduces every coefficient bit for bit. Every variable gets a bounds
// line, in column order, so the column order survives the round trip.

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"

namespace fmp {

struct LpParseError : std::runtime_error {
  LpParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

namespace lp_detail {

inline std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline bool valid_name(std::string_view s) {
  if (s.empty() || s.size() > 255) return false;
  const char c0 = s[0];
  if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.' || c0 == 'e' || c0 == 'E') return false;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) continue;
    if (std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(c) == std::string_view::npos) return false;
  }
  return true;
}

inline const char* sense_token(Sense s) { return s == Sense::Le ? "<=" : s == Sense::Ge ? ">=" : "="; }

// Writes terms, wrapping long lines.
inline void write_terms(std::ostream& out, const MatrixModel& m, const std::vector<Term>& terms, std::size_t& col) {
  bool first = true;
  for (const auto& t : terms) {
    std::string piece;
    if (first) piece = number(t.coef);
    else piece = t.coef < 0 || std::signbit(t.coef) ? "- " + number(-t.coef) : "+ " + number(t.coef);
    piece += " " + m.variable(t.col).name;
    if (col + piece.size() + 1 > 250) {
      out << "\n  ";
      col = 2;
    } else {
      out << ' ';
      ++col;
    }
    out << piece;
    col += piece.size();
    first = false;
  }
}

}  // namespace lp_detail

inline std::string emit_lp(const MatrixModel& model) {
  using namespace lp_detail;
  std::set<std::string> names;
  for (const auto& v : model.variables()) {
    if (!valid_name(v.name)) throw ModelError("invalid LP name " + v.name);
    if (!names.insert(v.name).second) throw ModelError("name collision " + v.name);
  }
  std::set<std::string> row_names{"obj"};
  for (const auto& r : model.rows()) {
    if (!valid_name(r.name)) throw ModelError("invalid LP name " + r.name);
    if (!row_names.insert(r.name).second) throw ModelError("name collision " + r.name);
  }

  std::ostringstream out;
  out << "\\ fmp model\n";
  out << "Minimize\n obj:";
  std::size_t col = 5;
  write_terms(out, model, model.objective(), col);
  out << "\nSubject To\n";
  for (const auto& r : model.rows()) {
    out << ' ' << r.name << ':';
    col = r.name.size() + 2;
    write_terms(out, model, r.terms, col);
    out << ' ' << sense_token(r.sense) << ' ' << number(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.lb == v.ub) out << ' ' << v.name << " = " << number(v.lb) << '\n';
    else if (std::isinf(v.lb) && std::isinf(v.ub)) out << ' ' << v.name << " free\n";
    else out << ' ' << number(v.lb) << " <= " << v.name << " <= " << number(v.ub) << '\n';
  }
  bool any_bin = false;
  for (const auto& v : model.variables()) any_bin |= v.kind == VarKind::Binary;
  if (any_bin) {
    out << "Binaries\n";
    for (const auto& v : model.variables())
      if (v.kind == VarKind::Binary) out << ' ' << v.name << '\n';
  }
  out << "End\n";
  return out.str();
}

namespace lp_detail {

enum class Tok { Name, Number, Sense, Colon, Plus, Minus, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  Sense sense = Sense::Le;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Tokens of one logical line; returns false at end of input.
  bool next_line(std::vector<Token>& out) {
    out.clear();
    while (pos_ < text_.size()) {
      const auto eol = text_.find('\n', pos_);
      const auto line = text_.substr(pos_, eol == std::string_view::npos ? std::string_view::npos : eol - pos_);
      pos_ = eol == std::string_view::npos ? text_.size() : eol + 1;
      ++lineno_;
      tokenize(line, out);
      if (!out.empty()) return true;
    }
    return false;
  }

 private:
  void tokenize(std::string_view line, std::vector<Token>& out) {
    std::size_t k = 0;
    while (k < line.size()) {
      const char c = line[k];
      const int column = static_cast<int>(k) + 1;
      if (c == '\\') break;
      if (std::isspace(static_cast<unsigned char>(c))) { ++k; continue; }
      if (c == ':') { out.push_back({Tok::Colon, ":", 0, Sense::Le, lineno_, column}); ++k; continue; }
      if (c == '+') { out.push_back({Tok::Plus, "+", 0, Sense::Le, lineno_, column}); ++k; continue; }
      if (c == '-' && !(k + 3 <= line.size() && line.substr(k, 4) == "-inf")) {
        out.push_back({Tok::Minus, "-", 0, Sense::Le, lineno_, column});
        ++k;
        continue;
      }
      if (c == '<' || c == '>' || c == '=') {
        std::size_t e = k + 1;
        while (e < line.size() && (line[e] == '<' || line[e] == '>' || line[e] == '=')) ++e;
        const auto s = line.substr(k, e - k);
        Sense sense;
        if (s == "<=" || s == "=<" || s == "<") sense = Sense::Le;
        else if (s == ">=" || s == "=>" || s == ">") sense = Sense::Ge;
        else if (s == "=") sense = Sense::Eq;
        else throw LpParseError(lineno_, column, "bad sense token '" + std::string(s) + "'");
        out.push_back({Tok::Sense, std::string(s), 0, sense, lineno_, column});
        k = e;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        double v = 0.0;
        auto [p, ec] = std::from_chars(line.data() + k, line.data() + line.size(), v);
        if (ec != std::errc{}) throw LpParseError(lineno_, column, "bad number");
        const std::size_t e = static_cast<std::size_t>(p - line.data());
        out.push_back({Tok::Number, std::string(line.substr(k, e - k)), v, Sense::Le, lineno_, column});
        k = e;
        continue;
      }
      std::size_t e = k;
      while (e < line.size() && !std::isspace(static_cast<unsigned char>(line[e])) &&
             std::string_view(":+<>=").find(line[e]) == std::string_view::npos &&
             !(line[e] == '-' && e > k))
        ++e;
      auto word = line.substr(k, e - k);
      if (word == "-inf" || word == "inf" || word == "-infinity" || word == "infinity") {
        out.push_back({Tok::Number, std::string(word), word[0] == '-' ? -kInf : kInf, Sense::Le, lineno_, column});
      } else {
        const bool keyword = word.size() == 3 && (word[0] == 'e' || word[0] == 'E') && (word[1] | 0x20) == 'n' &&
                             (word[2] | 0x20) == 'd';
        if (!keyword && !valid_name(word)) throw LpParseError(lineno_, column, "invalid name '" + std::string(word) + "'");
        out.push_back({Tok::Name, std::string(word), 0, Sense::Le, lineno_, column});
      }
      k = e;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

inline std::optional<Section> section_of(const std::vector<Token>& toks, bool& maximize) {
  std::string joined;
  for (const auto& t : toks) {
    if (t.kind != Tok::Name) return std::nullopt;
    joined += (joined.empty() ? "" : " ") + lower(t.text);
  }
  if (joined == "minimize" || joined == "minimum" || joined == "min") { maximize = false; return Section::Objective; }
  if (joined == "maximize" || joined == "maximum" || joined == "max") { maximize = true; return Section::Objective; }
  if (joined == "subject to" || joined == "such that" || joined == "st" || joined == "s.t.") return Section::Constraints;
  if (joined == "bounds" || joined == "bound") return Section::Bounds;
  if (joined == "binaries" || joined == "binary" || joined == "bin") return Section::Binaries;
  if (joined == "generals" || joined == "general" || joined == "gen") return Section::Generals;
  if (joined == "end") return Section::End;
  return std::nullopt;
}

}  // namespace lp_detail

/// Parses LP text produced by emit_lp (and the common subset of the format:
/// comments, blank lines, wrapped rows, alternative sense spellings).
/// Maximization objectives are negated into minimization.
inline MatrixModel parse_lp(std::string_view text) {
  using namespace lp_detail;
  Lexer lex(text);
  std::vector<Token> line;

  struct PendingRow {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    Sense sense = Sense::Le;
    double rhs = 0.0;
  };
  // Columns: bounds-section order first, then first appearance elsewhere.
  std::vector<std::string> bound_order, order;
  std::set<std::string> seen, seen_bound;
  auto note = [&](const std::string& n) {
    if (seen.insert(n).second) order.push_back(n);
  };
  auto note_bound = [&](const std::string& n) {
    if (seen_bound.insert(n).second) bound_order.push_back(n);
  };

  std::vector<std::pair<std::string, double>> objective;
  std::vector<PendingRow> rows;
  struct Bound { double lb = 0.0; double ub = kInf; bool set = false; };
  std::map<std::string, Bound> bounds;
  std::set<std::string> binaries;
  bool maximize = false;
  Section section = Section::None;

  // Current expression being accumulated (objective or constraint).
  std::vector<Token> expr;
  bool have_expr = false;

  auto parse_linear = [&](const std::vector<Token>& toks, std::size_t k, std::size_t end,
                          std::vector<std::pair<std::string, double>>& out) {
    double sign = 1.0;
    std::optional<double> coef;
    bool need_term = true;
    for (; k < end; ++k) {
      const auto& t = toks[k];
      if (t.kind == Tok::Plus || t.kind == Tok::Minus) {
        if (!need_term && coef) throw LpParseError(t.line, t.column, "dangling coefficient");
        if (t.kind == Tok::Minus) sign = -sign;
        need_term = true;
      } else if (t.kind == Tok::Number) {
        if (coef) throw LpParseError(t.line, t.column, "two coefficients in a row");
        coef = t.value;
      } else if (t.kind == Tok::Name) {
        if (!need_term) throw LpParseError(t.line, t.column, "missing operator before '" + t.text + "'");
        out.push_back({t.text, sign * coef.value_or(1.0)});
        note(t.text);
        sign = 1.0;
        coef.reset();
        need_term = false;
      } else {
        throw LpParseError(t.line, t.column, "unexpected '" + t.text + "'");
      }
    }
    if (coef) {
      const auto& t = toks[end - 1];
      throw LpParseError(t.line, t.column, "constant terms on the left-hand side are not supported");
    }
  };

  auto flush = [&]() {
    if (!have_expr) return;
    have_expr = false;
    auto& toks = expr;
    std::size_t k = 0;
    std::string name;
    if (toks.size() >= 2 && toks[0].kind == Tok::Name && toks[1].kind == Tok::Colon) {
      name = toks[0].text;
      k = 2;
    }
    if (section == Section::Objective) {
      parse_linear(toks, k, toks.size(), objective);
      return;
    }
    std::size_t s = k;
    while (s < toks.size() && toks[s].kind != Tok::Sense) ++s;
    if (s == toks.size()) throw LpParseError(toks.back().line, toks.back().column, "constraint without sense");
    PendingRow row;
    row.name = name.empty() ? "R" + std::to_string(rows.size() + 1) : name;
    parse_linear(toks, k, s, row.terms);
    row.sense = toks[s].sense;
    std::size_t r = s + 1;
    double sign = 1.0;
    if (r < toks.size() && (toks[r].kind == Tok::Minus || toks[r].kind == Tok::Plus)) {
      if (toks[r].kind == Tok::Minus) sign = -1.0;
      ++r;
    }
    if (r >= toks.size() || toks[r].kind != Tok::Number)
      throw LpParseError(toks[s].line, toks[s].column, "expected right-hand side constant");
    row.rhs = sign * toks[r].value;
    if (r + 1 != toks.size()) throw LpParseError(toks[r + 1].line, toks[r + 1].column, "trailing tokens");
    rows.push_back(std::move(row));
  };

  auto parse_bound = [&](const std::vector<Token>& toks) {
    // forms: name free | name = v | lo <= name | name <= hi | name >= lo | lo <= name <= hi
    auto num_at = [&](std::size_t& k, double& v) {
      double sign = 1.0;
      if (k < toks.size() && (toks[k].kind == Tok::Minus || toks[k].kind == Tok::Plus)) {
        if (toks[k].kind == Tok::Minus) sign = -1.0;
        ++k;
      }
      if (k < toks.size() && toks[k].kind == Tok::Number) {
        v = sign * toks[k].value;
        ++k;
        return true;
      }
      return false;
    };
    std::size_t k = 0;
    double lo = 0.0;
    if (num_at(k, lo)) {
      if (k + 1 >= toks.size() || toks[k].kind != Tok::Sense || toks[k + 1].kind != Tok::Name)
        throw LpParseError(toks[0].line, toks[0].column, "malformed bound");
      const Sense s1 = toks[k].sense;
      const auto& name = toks[k + 1].text;
      note_bound(name);
      auto& b = bounds[name];
      b.set = true;
      if (s1 == Sense::Le) b.lb = lo;
      else if (s1 == Sense::Ge) b.ub = lo;
      else b.lb = b.ub = lo;
      k += 2;
      if (k < toks.size()) {
        if (toks[k].kind != Tok::Sense) throw LpParseError(toks[k].line, toks[k].column, "malformed bound");
        const Sense s2 = toks[k].sense;
        ++k;
        double hi = 0.0;
        if (!num_at(k, hi)) throw LpParseError(toks[k - 1].line, toks[k - 1].column, "expected bound value");
        if (s2 == Sense::Le) b.ub = hi;
        else if (s2 == Sense::Ge) b.lb = hi;
        else b.lb = b.ub = hi;
      }
      if (k != toks.size()) throw LpParseError(toks[k].line, toks[k].column, "trailing tokens in bound");
      return;
    }
    if (toks[0].kind != Tok::Name) throw LpParseError(toks[0].line, toks[0].column, "malformed bound");
    const auto& name = toks[0].text;
    note_bound(name);
    auto& b = bounds[name];
    b.set = true;
    if (toks.size() == 2 && toks[1].kind == Tok::Name && lower(toks[1].text) == "free") {
      b.lb = -kInf;
      b.ub = kInf;
      return;
    }
    if (toks.size() < 3 || toks[1].kind != Tok::Sense) throw LpParseError(toks[0].line, toks[0].column, "malformed bound");
    k = 2;
    double v = 0.0;
    if (!num_at(k, v) || k != toks.size()) throw LpParseError(toks[1].line, toks[1].column, "expected bound value");
    if (toks[1].sense == Sense::Le) b.ub = v;
    else if (toks[1].sense == Sense::Ge) b.lb = v;
    else b.lb = b.ub = v;
  };

  while (lex.next_line(line)) {
    bool maximize_here = maximize;
    if (auto sec = section_of(line, maximize_here)) {
      flush();
      section = *sec;
      maximize = maximize_here;
      if (section == Section::End) break;
      continue;
    }
    switch (section) {
      case Section::None:
        throw LpParseError(line[0].line, line[0].column, "content before any section header");
      case Section::Objective:
      case Section::Constraints: {
        // A new row starts with "name:"; otherwise the line continues the
        // current expression. Rows without names start after a completed row.
        const bool starts_named = line.size() >= 2 && line[0].kind == Tok::Name && line[1].kind == Tok::Colon;
        bool complete = false;
        if (have_expr && section == Section::Constraints) {
          for (std::size_t q = 0; q + 1 < expr.size(); ++q)
            if (expr[q].kind == Tok::Sense) complete = true;
        }
        if (starts_named || complete) flush();
        if (!have_expr) expr.clear();
        expr.insert(expr.end(), line.begin(), line.end());
        have_expr = true;
        break;
      }
      case Section::Bounds:
        parse_bound(line);
        break;
      case Section::Binaries:
      case Section::Generals:
        for (const auto& t : line) {
          if (t.kind != Tok::Name) throw LpParseError(t.line, t.column, "expected variable name");
          if (section == Section::Generals) throw LpParseError(t.line, t.column, "general integers are not supported");
          binaries.insert(t.text);
          note(t.text);
        }
        break;
      case Section::End:
        break;
    }
  }
  flush();
  if (section != Section::End) throw LpParseError(0, 0, "missing End");

  for (const auto& name : order)
    if (!seen_bound.count(name)) bound_order.push_back(name);
  MatrixModel model;
  for (const auto& name : bound_order) {
    const bool bin = binaries.count(name) > 0;
    auto it = bounds.find(name);
    double lb = 0.0;
    double ub = bin ? 1.0 : kInf;
    if (it != bounds.end() && it->second.set) {
      lb = it->second.lb;
      ub = bin ? std::min(it->second.ub, 1.0) : it->second.ub;
    }
    model.add_variable(name, bin ? VarKind::Binary : VarKind::Continuous, lb, ub);
  }
  std::vector<Term> obj;
  for (const auto& [n, c] : objective) obj.push_back({model.column(n), maximize ? -c : c});
  model.set_objective(std::move(obj));
  for (auto& r : rows) {
    std::vector<Term> terms;
    for (const auto& [n, c] : r.terms) terms.push_back({model.column(n), c});
    model.add_row(std::move(r.name), std::move(terms), r.sense, r.rhs);
  }
  return model;
}

}  // namespace fmp
