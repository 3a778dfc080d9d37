#pragma once

// Signature-typed noncommutative *-polynomial rewriting over the block
// calculus of the cut-and-paste construction.  Everything here is exact
// (integer scalar ring); no floating point.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fredlab::symbolic {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SignatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The five summands of the glued space; H0 is shared by both modules after
// the middle identification, so the tilde calculus has no H0t.
enum class Space : uint8_t { H1, H0, H2, H1t, H2t };
const char* space_name(Space s);

// Generators of the calculus.  Signatures (target <- source):
//   a: H1<-H1   b: H1<-H0   c: H0<-H0   d: H0<-H2   e: H2<-H2
//   at: H1t<-H1t   bt: H1t<-H0   dt: H0<-H2t   et: H2t<-H2t
// a, c, e, at, et are self-adjoint; the middle block of the second module is
// identified with c ("ct" parses as an alias).
struct Generator {
  const char* name;
  Space target, source;
  bool self_adjoint;
};
const std::vector<Generator>& generator_table();
int generator_index(std::string_view name);  // -1 if unknown

struct Sym {
  uint8_t gen = 0;
  bool star = false;  // normalized away on self-adjoint generators
  friend bool operator==(const Sym&, const Sym&) = default;
};
Space sym_target(Sym s);
Space sym_source(Sym s);
Sym make_sym(std::string_view name, bool star);

// A word is a composable product, leftmost factor applied last (matrix
// convention).  The empty word is the typed identity; its spaces are
// inferred from context.
using Word = std::vector<Sym>;
bool word_composable(const Word& w);
Space word_target(const Word& w);  // nonempty words only
Space word_source(const Word& w);
Word word_adjoint(const Word& w);

// Total order used for canonical forms and as the termination order: degree
// first, then precedence ranks (every rewrite rule strictly decreases it).
bool word_less(const Word& lhs, const Word& rhs);

// Exact integer polynomials in s = sin t, k = cos t, reduced modulo
// s^2 + k^2 - 1.  Canonical form keeps s-degree <= 1 via s^2 -> 1 - k^2.
class ScalarPoly {
 public:
  ScalarPoly() = default;
  static ScalarPoly integer(long long v);
  static ScalarPoly s();
  static ScalarPoly k();

  ScalarPoly operator+(const ScalarPoly&) const;
  ScalarPoly operator-(const ScalarPoly&) const;
  ScalarPoly operator*(const ScalarPoly&) const;
  ScalarPoly operator-() const;
  bool operator==(const ScalarPoly&) const = default;

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  // Substitute integer values for s and k (used at the endpoint s=1, k=0).
  long long eval(long long s_val, long long k_val) const;
  std::string str() const;

 private:
  // (s-degree in {0,1}, k-degree) -> coefficient; no zero coefficients.
  std::map<std::pair<int, int>, long long> terms_;
  void normalize();
};

// Finite sum of (scalar poly) * (word).  All nonempty words in one term must
// share the same overall signature.
class Term {
 public:
  Term() = default;
  static Term zero();
  static Term identity();  // empty word, coefficient 1
  static Term scalar(const ScalarPoly& p);
  static Term monomial(const Word& w, const ScalarPoly& p = ScalarPoly::integer(1));

  Term operator+(const Term&) const;
  Term operator-(const Term&) const;
  Term operator*(const Term&) const;  // composition; throws SignatureError
  Term operator-() const;
  bool operator==(const Term&) const;

  Term adjoint() const;
  bool is_zero() const { return words_.empty(); }
  bool is_identity() const;
  // Signature (target, source); nullopt for 0 and for pure scalar terms.
  std::optional<std::pair<Space, Space>> signature() const;
  Term eval_scalars(long long s_val, long long k_val) const;
  std::string str() const;

  const std::map<Word, ScalarPoly, bool (*)(const Word&, const Word&)>& words() const {
    return words_;
  }
  void set_monomial(const Word& w, const ScalarPoly& p);  // adds, merging

 private:
  std::map<Word, ScalarPoly, bool (*)(const Word&, const Word&)> words_{word_less};
  void check_signature(const Word& w) const;
};

Term parse_term(std::string_view text);

struct RewriteStep {
  std::string rule;  // rule id, or "KILL"
  int position = 0;  // factor index where the match starts
};

struct Rule {
  std::string id;
  Word lhs;  // single word, implicit coefficient 1
  Term rhs;
};

class RewriteSystem {
 public:
  // The fixed axiom set of the block calculus, adjoint-closed:
  //   A1: a a -> 1 - b b*          A2: a b -> - b c
  //   A3: c d -> - d e             A4: d* d -> 1 - e e
  //   A5: b* b -> 1 - c c - d d*
  //   A1t..A5t: tilde copies (shared c)
  //   A6: dt dt* -> d d*  and  bt* bt -> b* b   (cross-module agreement)
  //   KILL: any word whose overall signature crosses {H1,H1t} <-> {H2,H2t}
  //         rewrites to 0 (corner-free gauge).
  static RewriteSystem standard();
  // One rule per line, "LHS -> RHS"; '#' starts a comment.  Rules get ids
  // U1, U2, ... in file order; KILL is enabled.
  static RewriteSystem from_lines(const std::vector<std::string>& lines);

  void add_rule(const std::string& id, std::string_view lhs, std::string_view rhs);
  // Drops every oriented rule carrying the axiom id ("A6" drops both of its
  // components); "KILL" disables the crossing rule.
  void drop(const std::string& id);
  bool kill_enabled() const { return kill_; }
  const std::vector<Rule>& rules() const { return rules_; }

  int max_steps = 100000;
  int max_orderings = 24;  // bounded fallback search over scan orderings

  // Priority-ordered, leftmost match, to a fixed point.  KILL is applied
  // first and after every step.  Throws StepLimitError past max_steps.
  Term reduce(const Term& t, std::vector<RewriteStep>* trace = nullptr) const;

 private:
  std::vector<Rule> rules_;
  bool kill_ = true;
  Term reduce_with_order(const Term& t, const std::vector<int>& order,
                         std::vector<RewriteStep>* trace) const;
  friend struct ReduceImpl;
};

// Square matrix of terms with per-slot spaces; entry (i,j) maps
// space[j] -> space[i].
struct SymMatrix {
  std::vector<Space> spaces;
  std::vector<std::vector<Term>> entries;

  int size() const { return static_cast<int>(spaces.size()); }
  void validate() const;  // throws SignatureError
};

// The 3x3 glued operator [[a,b,0],[b*,c,dt],[0,dt*,et]] on H1+H0+H2t.
SymMatrix diamond_matrix();
// The 6x6 homotopy operator on H1+H0+H2+H1t+H0+H2t, entries linear in s,k.
SymMatrix homotopy_matrix();

SymMatrix square_symbolic(const SymMatrix& m, const RewriteSystem& rs);

struct CertificateEntry {
  int row = 0, col = 0;  // 1-indexed
  bool pass = false;
  std::string normal_form;
  std::vector<RewriteStep> steps;
};

struct Certificate {
  std::string name;
  bool pass = false;
  std::vector<CertificateEntry> entries;  // row-major
  bool adjoint_symmetric = true;  // homotopy only: matrix equals its adjoint
  bool endpoint_match = true;     // homotopy only: s=1,k=0 factorization
  long long total_steps = 0;
  double elapsed_seconds = 0.0;
  // The calculus treats both compact-equivalence strengths as exact
  // equalities of the quotient; recorded here rather than modeled.
  std::string note;
};

struct VerifyOptions {
  std::vector<std::string> drop_axioms;
  int max_steps = 100000;
};

// Certifies that the squared diamond matrix reduces to the identity pattern
// (9 entries).
Certificate verify_proposition(const VerifyOptions& opts = {});
// Certifies the squared homotopy matrix (36 entries), its symbolic
// self-adjointness, and the endpoint factorization at s=1, k=0.
Certificate verify_homotopy(const VerifyOptions& opts = {});

}  // namespace fredlab::symbolic
