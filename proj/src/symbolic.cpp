#include "fredlab/symbolic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <numeric>
#include <sstream>

namespace fredlab::symbolic {

namespace {

// 0:a 1:b 2:c 3:d 4:e 5:at 6:bt 7:dt 8:et
const std::vector<Generator> kGenerators = {
    {"a", Space::H1, Space::H1, true},   {"b", Space::H1, Space::H0, false},
    {"c", Space::H0, Space::H0, true},   {"d", Space::H0, Space::H2, false},
    {"e", Space::H2, Space::H2, true},   {"at", Space::H1t, Space::H1t, true},
    {"bt", Space::H1t, Space::H0, false}, {"dt", Space::H0, Space::H2t, false},
    {"et", Space::H2t, Space::H2t, true},
};

// Precedence used by the termination order (higher precedence = smaller
// rank).  Every rule's right side is strictly below its left side in the
// induced degree-lexicographic order, so reduction always terminates.
int sym_rank(Sym s) {
  static const std::array<std::array<int, 2>, 9> rank = {{
      {1, 1},    // a
      {4, 5},    // b, b*
      {6, 6},    // c
      {8, 10},   // d, d*
      {12, 12},  // e
      {0, 0},    // at
      {2, 3},    // bt, bt*
      {7, 9},    // dt, dt*
      {11, 11},  // et
  }};
  return rank[s.gen][s.star ? 1 : 0];
}

int side(Space s) {
  switch (s) {
    case Space::H1:
    case Space::H1t:
      return 1;
    case Space::H2:
    case Space::H2t:
      return 2;
    default:
      return 0;
  }
}

bool crossing(const Word& w) {
  if (w.empty()) return false;
  int st = side(word_target(w)), ss = side(word_source(w));
  return (st == 1 && ss == 2) || (st == 2 && ss == 1);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const Sym& s : w) {
    if (!out.empty()) out += ' ';
    out += kGenerators[s.gen].name;
    if (s.star) out += '*';
  }
  return out;
}

}  // namespace

const char* space_name(Space s) {
  switch (s) {
    case Space::H1: return "H1";
    case Space::H0: return "H0";
    case Space::H2: return "H2";
    case Space::H1t: return "H1t";
    case Space::H2t: return "H2t";
  }
  return "?";
}

const std::vector<Generator>& generator_table() { return kGenerators; }

int generator_index(std::string_view name) {
  for (size_t i = 0; i < kGenerators.size(); ++i)
    if (name == kGenerators[i].name) return static_cast<int>(i);
  return -1;
}

Space sym_target(Sym s) {
  const Generator& g = kGenerators[s.gen];
  return s.star ? g.source : g.target;
}

Space sym_source(Sym s) {
  const Generator& g = kGenerators[s.gen];
  return s.star ? g.target : g.source;
}

Sym make_sym(std::string_view name, bool star) {
  int idx = generator_index(name == "ct" ? "c" : name);
  if (idx < 0) throw ParseError("unknown generator: " + std::string(name));
  Sym s{static_cast<uint8_t>(idx), star};
  if (kGenerators[idx].self_adjoint) s.star = false;
  return s;
}

bool word_composable(const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (sym_source(w[i]) != sym_target(w[i + 1])) return false;
  return true;
}

Space word_target(const Word& w) { return sym_target(w.front()); }
Space word_source(const Word& w) { return sym_source(w.back()); }

Word word_adjoint(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    Sym s = *it;
    if (!kGenerators[s.gen].self_adjoint) s.star = !s.star;
    out.push_back(s);
  }
  return out;
}

bool word_less(const Word& lhs, const Word& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  for (size_t i = 0; i < lhs.size(); ++i) {
    int rl = sym_rank(lhs[i]), rr = sym_rank(rhs[i]);
    if (rl != rr) return rl < rr;
  }
  return false;
}

// ---------------------------------------------------------------- ScalarPoly

void ScalarPoly::normalize() {
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
      auto [sd, kd] = it->first;
      if (sd < 2) continue;
      long long c = it->second;
      terms_.erase(it);
      terms_[{sd - 2, kd}] += c;       // s^2 -> 1 - k^2
      terms_[{sd - 2, kd + 2}] -= c;
      changed = true;
      break;
    }
  }
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

ScalarPoly ScalarPoly::integer(long long v) {
  ScalarPoly p;
  if (v != 0) p.terms_[{0, 0}] = v;
  return p;
}

ScalarPoly ScalarPoly::s() {
  ScalarPoly p;
  p.terms_[{1, 0}] = 1;
  return p;
}

ScalarPoly ScalarPoly::k() {
  ScalarPoly p;
  p.terms_[{0, 1}] = 1;
  return p;
}

ScalarPoly ScalarPoly::operator+(const ScalarPoly& o) const {
  ScalarPoly out = *this;
  for (const auto& [key, c] : o.terms_) out.terms_[key] += c;
  out.normalize();
  return out;
}

ScalarPoly ScalarPoly::operator-(const ScalarPoly& o) const { return *this + (-o); }

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly out = *this;
  for (auto& [key, c] : out.terms_) c = -c;
  return out;
}

ScalarPoly ScalarPoly::operator*(const ScalarPoly& o) const {
  ScalarPoly out;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      out.terms_[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
  out.normalize();
  return out;
}

bool ScalarPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == std::pair<int, int>{0, 0} &&
         terms_.begin()->second == 1;
}

long long ScalarPoly::eval(long long s_val, long long k_val) const {
  long long acc = 0;
  for (const auto& [key, c] : terms_) {
    long long v = c;
    for (int i = 0; i < key.first; ++i) v *= s_val;
    for (int i = 0; i < key.second; ++i) v *= k_val;
    acc += v;
  }
  return acc;
}

std::string ScalarPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    long long a = c;
    if (first) {
      if (a < 0) { out += "-"; a = -a; }
    } else {
      out += (a < 0) ? " - " : " + ";
      if (a < 0) a = -a;
    }
    first = false;
    std::string mono;
    if (key.first == 1) mono += "s";
    if (key.second > 0) {
      if (!mono.empty()) mono += ' ';
      mono += "k";
      if (key.second > 1) mono += "^" + std::to_string(key.second);
    }
    if (mono.empty()) {
      out += std::to_string(a);
    } else {
      if (a != 1) out += std::to_string(a) + " ";
      out += mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------------- Term

Term Term::zero() { return Term(); }

Term Term::identity() { return scalar(ScalarPoly::integer(1)); }

Term Term::scalar(const ScalarPoly& p) {
  Term t;
  if (!p.is_zero()) t.words_.emplace(Word{}, p);
  return t;
}

Term Term::monomial(const Word& w, const ScalarPoly& p) {
  if (!word_composable(w)) throw SignatureError("word is not composable: " + word_str(w));
  Term t;
  if (!p.is_zero()) t.words_.emplace(w, p);
  return t;
}

void Term::check_signature(const Word& w) const {
  auto sig = signature();
  if (w.empty()) {
    if (sig && sig->first != sig->second)
      throw SignatureError("identity cannot join a term typed " +
                           std::string(space_name(sig->first)) + " <- " +
                           std::string(space_name(sig->second)));
    return;
  }
  Space t = word_target(w), s = word_source(w);
  if (sig) {
    if (sig->first != t || sig->second != s)
      throw SignatureError(std::string("signature mismatch: ") + space_name(t) + " <- " +
                           space_name(s) + " vs " + space_name(sig->first) + " <- " +
                           space_name(sig->second));
  } else if (!words_.empty() && t != s) {
    // only the polymorphic identity is present
    throw SignatureError(std::string("identity cannot join a term typed ") + space_name(t) +
                         " <- " + space_name(s));
  }
}

void Term::set_monomial(const Word& w, const ScalarPoly& p) {
  if (p.is_zero()) return;
  check_signature(w);
  auto it = words_.find(w);
  if (it == words_.end()) {
    words_.emplace(w, p);
  } else {
    it->second = it->second + p;
    if (it->second.is_zero()) words_.erase(it);
  }
}

Term Term::operator+(const Term& o) const {
  Term out = *this;
  for (const auto& [w, p] : o.words_) out.set_monomial(w, p);
  return out;
}

Term Term::operator-(const Term& o) const { return *this + (-o); }

Term Term::operator-() const {
  Term out;
  for (const auto& [w, p] : words_) out.words_.emplace(w, -p);
  return out;
}

Term Term::operator*(const Term& o) const {
  Term out;
  for (const auto& [wa, pa] : words_) {
    for (const auto& [wb, pb] : o.words_) {
      Word w;
      if (wa.empty()) {
        w = wb;
      } else if (wb.empty()) {
        w = wa;
      } else {
        if (word_source(wa) != word_target(wb))
          throw SignatureError(std::string("cannot compose ") + word_str(wa) + " (source " +
                               space_name(word_source(wa)) + ") with " + word_str(wb) +
                               " (target " + space_name(word_target(wb)) + ")");
        w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
      }
      out.set_monomial(w, pa * pb);
    }
  }
  return out;
}

bool Term::operator==(const Term& o) const {
  if (words_.size() != o.words_.size()) return false;
  auto it = words_.begin();
  auto jt = o.words_.begin();
  for (; it != words_.end(); ++it, ++jt)
    if (it->first != jt->first || !(it->second == jt->second)) return false;
  return true;
}

Term Term::adjoint() const {
  Term out;
  for (const auto& [w, p] : words_) out.words_.emplace(word_adjoint(w), p);
  return out;
}

bool Term::is_identity() const {
  return words_.size() == 1 && words_.begin()->first.empty() && words_.begin()->second.is_one();
}

std::optional<std::pair<Space, Space>> Term::signature() const {
  for (const auto& [w, p] : words_)
    if (!w.empty()) return std::make_pair(word_target(w), word_source(w));
  return std::nullopt;
}

Term Term::eval_scalars(long long s_val, long long k_val) const {
  Term out;
  for (const auto& [w, p] : words_)
    out.set_monomial(w, ScalarPoly::integer(p.eval(s_val, k_val)));
  return out;
}

std::string Term::str() const {
  if (words_.empty()) return "0";
  std::string out;
  for (const auto& [w, p] : words_) {
    if (!out.empty()) out += " + ";
    std::string ps = p.str();
    if (w.empty()) {
      out += ps;
    } else if (p.is_one()) {
      out += word_str(w);
    } else if (ps.find(" + ") != std::string::npos || ps.find(" - ") != std::string::npos) {
      out += "(" + ps + ") " + word_str(w);
    } else {
      out += ps + " " + word_str(w);
    }
  }
  return out;
}

// -------------------------------------------------------------------- parser

namespace {

struct Token {
  enum Kind { Int, Name, Star, Caret, Plus, Minus, Dot, LParen, RParen, End } kind;
  std::string text;
  long long value = 0;
  int pos = 0;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> toks;
  size_t i = 0;
  while (i < text.size()) {
    char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    int pos = static_cast<int>(i);
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      long long v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      toks.push_back({Token::Int, "", v, pos});
    } else if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string name;
      while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i])))
        name += text[i++];
      toks.push_back({Token::Name, name, 0, pos});
    } else {
      ++i;
      switch (ch) {
        case '*': toks.push_back({Token::Star, "*", 0, pos}); break;
        case '^': toks.push_back({Token::Caret, "^", 0, pos}); break;
        case '+': toks.push_back({Token::Plus, "+", 0, pos}); break;
        case '-': toks.push_back({Token::Minus, "-", 0, pos}); break;
        case '.': toks.push_back({Token::Dot, ".", 0, pos}); break;
        case '(': toks.push_back({Token::LParen, "(", 0, pos}); break;
        case ')': toks.push_back({Token::RParen, ")", 0, pos}); break;
        default:
          throw ParseError("unexpected character '" + std::string(1, ch) + "' at offset " +
                           std::to_string(pos));
      }
    }
  }
  toks.push_back({Token::End, "", 0, static_cast<int>(text.size())});
  return toks;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Term parse() {
    Term t = expr();
    expect(Token::End, "end of input");
    return t;
  }

 private:
  std::vector<Token> toks_;
  size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  Token next() { return toks_[at_++]; }
  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k)
      throw ParseError("expected " + std::string(what) + " at offset " +
                       std::to_string(peek().pos));
    ++at_;
  }

  Term expr() {
    bool neg = false;
    if (peek().kind == Token::Plus) {
      next();
    } else if (peek().kind == Token::Minus) {
      next();
      neg = true;
    }
    Term acc = product();
    if (neg) acc = -acc;
    while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
      bool sub = next().kind == Token::Minus;
      // tolerate a stacked sign ("+ -1 d d*"), as printed for negative
      // leading coefficients
      while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
        if (next().kind == Token::Minus) sub = !sub;
      }
      Term rhs = product();
      acc = sub ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Term product() {
    Term acc = postfix();
    for (;;) {
      Token::Kind k = peek().kind;
      if (k == Token::Dot) {
        next();
        acc = acc * postfix();
      } else if (k == Token::Int || k == Token::Name || k == Token::LParen) {
        acc = acc * postfix();
      } else {
        return acc;
      }
    }
  }

  Term postfix() {
    Term t = atom();
    for (;;) {
      if (peek().kind == Token::Star) {
        next();
        t = t.adjoint();
      } else if (peek().kind == Token::Caret) {
        next();
        if (peek().kind != Token::Int)
          throw ParseError("expected an exponent at offset " + std::to_string(peek().pos));
        long long n = next().value;
        if (n > 1000) throw ParseError("exponent too large");
        Term base = t;
        t = Term::identity();
        for (long long i = 0; i < n; ++i) t = t * base;
      } else {
        return t;
      }
    }
  }

  Term atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Token::Int:
        return Term::scalar(ScalarPoly::integer(next().value));
      case Token::Name: {
        std::string name = next().text;
        if (name == "s") return Term::scalar(ScalarPoly::s());
        if (name == "k") return Term::scalar(ScalarPoly::k());
        return Term::monomial({make_sym(name, false)});
      }
      case Token::LParen: {
        next();
        Term t = expr();
        expect(Token::RParen, "')'");
        return t;
      }
      default:
        throw ParseError("expected a factor at offset " + std::to_string(tok.pos));
    }
  }
};

}  // namespace

Term parse_term(std::string_view text) { return Parser(text).parse(); }

// ------------------------------------------------------------- RewriteSystem

void RewriteSystem::add_rule(const std::string& id, std::string_view lhs_text,
                             std::string_view rhs_text) {
  Term lhs = parse_term(lhs_text);
  if (lhs.words().size() != 1 || lhs.words().begin()->first.empty() ||
      !lhs.words().begin()->second.is_one())
    throw ParseError("rule left side must be a single word: " + std::string(lhs_text));
  Word lw = lhs.words().begin()->first;
  Term rhs = parse_term(rhs_text);
  auto ls = std::make_pair(word_target(lw), word_source(lw));
  if (auto rs = rhs.signature()) {
    if (*rs != ls)
      throw SignatureError("rule does not preserve signature: " + std::string(lhs_text) +
                           " -> " + std::string(rhs_text));
  } else if (!rhs.is_zero() && ls.first != ls.second) {
    throw SignatureError("scalar right side requires a square signature: " +
                         std::string(lhs_text));
  }
  rules_.push_back({id, lw, rhs});
  // close under adjoints so Hermitian inputs reduce symmetrically
  Word la = word_adjoint(lw);
  if (la != lw) rules_.push_back({id, la, rhs.adjoint()});
}

RewriteSystem RewriteSystem::standard() {
  RewriteSystem rs;
  rs.add_rule("A1", "a a", "1 - b b*");
  rs.add_rule("A2", "a b", "- b c");
  rs.add_rule("A3", "c d", "- d e");
  rs.add_rule("A4", "d* d", "1 - e e");
  rs.add_rule("A5", "b* b", "1 - c c - d d*");
  rs.add_rule("A1t", "at at", "1 - bt bt*");
  rs.add_rule("A2t", "at bt", "- bt c");
  rs.add_rule("A3t", "c dt", "- dt et");
  rs.add_rule("A4t", "dt* dt", "1 - et et");
  rs.add_rule("A5t", "bt* bt", "1 - c c - dt dt*");
  rs.add_rule("A6", "dt dt*", "d d*");
  rs.add_rule("A6", "bt* bt", "b* b");  // shadowed by A5t unless that is dropped
  return rs;
}

RewriteSystem RewriteSystem::from_lines(const std::vector<std::string>& lines) {
  RewriteSystem rs;
  int n = 0;
  for (const std::string& raw : lines) {
    std::string line = raw.substr(0, raw.find('#'));
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    size_t arrow = line.find("->");
    if (arrow == std::string::npos || line.find("->", arrow + 2) != std::string::npos)
      throw ParseError("rule line must contain exactly one '->': " + raw);
    rs.add_rule("U" + std::to_string(++n), line.substr(0, arrow), line.substr(arrow + 2));
  }
  return rs;
}

void RewriteSystem::drop(const std::string& raw_id) {
  std::string id;
  for (char c : raw_id) id += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  // accept At3 as an alias for A3t
  if (id.size() == 3 && id[0] == 'A' && id[1] == 'T' && std::isdigit(id[2]))
    id = std::string("A") + id[2] + "T";
  if (id == "KILL") {
    kill_ = false;
    return;
  }
  std::string canonical = id;
  if (canonical.size() == 3 && canonical.back() == 'T') canonical.back() = 't';
  size_t before = rules_.size();
  std::erase_if(rules_, [&](const Rule& r) { return r.id == canonical; });
  if (rules_.size() == before)
    throw ParseError("unknown axiom id: " + raw_id);
}

namespace {

int find_subword(const Word& w, const Word& pat) {
  if (pat.empty() || pat.size() > w.size()) return -1;
  for (size_t pos = 0; pos + pat.size() <= w.size(); ++pos) {
    bool ok = true;
    for (size_t i = 0; i < pat.size(); ++i)
      if (!(w[pos + i] == pat[i])) {
        ok = false;
        break;
      }
    if (ok) return static_cast<int>(pos);
  }
  return -1;
}

}  // namespace

Term RewriteSystem::reduce_with_order(const Term& t, const std::vector<int>& order,
                                      std::vector<RewriteStep>* trace) const {
  long long steps = 0;
  auto kill_pass = [&](const Term& in) {
    if (!kill_) return in;
    Term out;
    for (const auto& [w, p] : in.words()) {
      if (crossing(w)) {
        if (trace) trace->push_back({"KILL", 0});
        ++steps;
        continue;
      }
      out.set_monomial(w, p);
    }
    return out;
  };

  Term cur = kill_pass(t);
  for (;;) {
    bool matched = false;
    for (int idx : order) {
      const Rule& rule = rules_[idx];
      for (const auto& [w, p] : cur.words()) {
        int pos = find_subword(w, rule.lhs);
        if (pos < 0) continue;
        Word prefix(w.begin(), w.begin() + pos);
        Word suffix(w.begin() + pos + rule.lhs.size(), w.end());
        Term repl = Term::monomial(prefix) * rule.rhs * Term::monomial(suffix);
        Term next;
        for (const auto& [w2, p2] : cur.words())
          if (w2 != w) next.set_monomial(w2, p2);
        next = next + Term::scalar(p) * repl;
        cur = kill_pass(next);
        if (trace) trace->push_back({rule.id, pos});
        if (++steps > max_steps)
          throw StepLimitError("rewrite exceeded " + std::to_string(max_steps) + " steps");
        matched = true;
        break;
      }
      if (matched) break;
    }
    if (!matched) return cur;
  }
}

Term RewriteSystem::reduce(const Term& t, std::vector<RewriteStep>* trace) const {
  std::vector<int> order(rules_.size());
  std::iota(order.begin(), order.end(), 0);
  int attempts = std::max(1, std::min<int>(max_orderings, static_cast<int>(rules_.size()) + 1));
  for (int r = 0; r < attempts; ++r) {
    if (trace) trace->clear();
    try {
      return reduce_with_order(t, order, trace);
    } catch (const StepLimitError&) {
      if (r + 1 == attempts) throw;
      std::rotate(order.begin(), order.begin() + 1, order.end());
    }
  }
  throw StepLimitError("rewrite failed under all orderings");
}

// ---------------------------------------------------------------- SymMatrix

void SymMatrix::validate() const {
  int n = size();
  if (static_cast<int>(entries.size()) != n)
    throw SignatureError("matrix row count does not match space list");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n)
      throw SignatureError("matrix is not square");
    for (int j = 0; j < n; ++j) {
      const Term& t = entries[i][j];
      if (auto sig = t.signature()) {
        if (sig->first != spaces[i] || sig->second != spaces[j])
          throw SignatureError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                               ") typed " + space_name(sig->first) + " <- " +
                               space_name(sig->second) + ", slot expects " +
                               space_name(spaces[i]) + " <- " + space_name(spaces[j]));
      } else if (!t.is_zero() && spaces[i] != spaces[j]) {
        throw SignatureError("scalar entry off the diagonal at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
    }
  }
}

namespace {

SymMatrix matrix_from_strings(std::vector<Space> spaces,
                              const std::vector<std::vector<const char*>>& rows) {
  SymMatrix m;
  m.spaces = std::move(spaces);
  for (const auto& row : rows) {
    std::vector<Term> r;
    r.reserve(row.size());
    for (const char* cell : row) r.push_back(parse_term(cell));
    m.entries.push_back(std::move(r));
  }
  m.validate();
  return m;
}

}  // namespace

SymMatrix diamond_matrix() {
  return matrix_from_strings({Space::H1, Space::H0, Space::H2t},
                             {{"a", "b", "0"},
                              {"b*", "c", "dt"},
                              {"0", "dt*", "et"}});
}

SymMatrix homotopy_matrix() {
  return matrix_from_strings(
      {Space::H1, Space::H0, Space::H2, Space::H1t, Space::H0, Space::H2t},
      {{"a", "b", "0", "0", "0", "0"},
       {"b*", "c", "k d", "0", "0", "- s dt"},
       {"0", "k d*", "e", "0", "s d*", "0"},
       {"0", "0", "0", "at", "bt", "0"},
       {"0", "0", "s d", "bt*", "c", "k dt"},
       {"0", "- s dt*", "0", "0", "k dt*", "et"}});
}

SymMatrix square_symbolic(const SymMatrix& m, const RewriteSystem& rs) {
  m.validate();
  int n = m.size();
  SymMatrix out;
  out.spaces = m.spaces;
  out.entries.assign(n, std::vector<Term>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Term sum;
      for (int k = 0; k < n; ++k) sum = sum + m.entries[i][k] * m.entries[k][j];
      out.entries[i][j] = rs.reduce(sum);
    }
  return out;
}

// ---------------------------------------------------------------- verifiers

namespace {

RewriteSystem system_for(const VerifyOptions& opts) {
  RewriteSystem rs = RewriteSystem::standard();
  rs.max_steps = opts.max_steps;
  for (const std::string& id : opts.drop_axioms) rs.drop(id);
  return rs;
}

Certificate certify_square(const std::string& name, const SymMatrix& m,
                           const RewriteSystem& rs) {
  Certificate cert;
  cert.name = name;
  cert.pass = true;
  cert.note =
      "both compact-equivalence strengths are modeled as exact equalities of the quotient "
      "calculus";
  int n = m.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Term sum;
      for (int k = 0; k < n; ++k) sum = sum + m.entries[i][k] * m.entries[k][j];
      CertificateEntry entry;
      entry.row = i + 1;
      entry.col = j + 1;
      Term nf = rs.reduce(sum, &entry.steps);
      Term expected = (i == j) ? Term::identity() : Term::zero();
      entry.pass = (nf == expected);
      entry.normal_form = nf.str();
      cert.total_steps += static_cast<long long>(entry.steps.size());
      cert.pass = cert.pass && entry.pass;
      cert.entries.push_back(std::move(entry));
    }
  }
  return cert;
}

}  // namespace

Certificate verify_proposition(const VerifyOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  RewriteSystem rs = system_for(opts);
  Certificate cert = certify_square("proposition", diamond_matrix(), rs);
  cert.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

Certificate verify_homotopy(const VerifyOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  RewriteSystem rs = system_for(opts);
  SymMatrix m = homotopy_matrix();
  Certificate cert = certify_square("homotopy", m, rs);

  // symbolic self-adjointness of the path itself
  int n = m.size();
  for (int i = 0; i < n && cert.adjoint_symmetric; ++i)
    for (int j = 0; j < n; ++j)
      if (!(m.entries[i][j] == m.entries[j][i].adjoint())) {
        cert.adjoint_symmetric = false;
        break;
      }

  // endpoint: at s=1, k=0 the path, reindexed by the pasting map
  // (1,2,6,4,5,3) with a sign flip on the third component, must equal the
  // direct sum of the two glued operators.
  static const int sigma[6] = {0, 1, 5, 3, 4, 2};
  static const int sign[6] = {1, 1, -1, 1, 1, 1};
  SymMatrix tilde_first =
      matrix_from_strings({Space::H1t, Space::H0, Space::H2},
                          {{"at", "bt", "0"},
                           {"bt*", "c", "d"},
                           {"0", "d*", "e"}});
  SymMatrix diamond = diamond_matrix();
  for (int i = 0; i < n && cert.endpoint_match; ++i) {
    for (int j = 0; j < n; ++j) {
      Term got = m.entries[sigma[i]][sigma[j]].eval_scalars(1, 0);
      if (sign[i] * sign[j] < 0) got = -got;
      Term expected;
      if (i < 3 && j < 3)
        expected = diamond.entries[i][j];
      else if (i >= 3 && j >= 3)
        expected = tilde_first.entries[i - 3][j - 3];
      if (!(got == expected)) {
        cert.endpoint_match = false;
        break;
      }
    }
  }

  cert.pass = cert.pass && cert.adjoint_symmetric && cert.endpoint_match;
  cert.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cert;
}

}  // namespace fredlab::symbolic
