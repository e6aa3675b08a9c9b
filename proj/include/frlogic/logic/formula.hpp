#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace frlogic::logic {

enum class Kind { Atom, Not, And, Or, Implies, Equiv, Box, Diamond };

/// Immutable multi-agent modal formula. Copies share structure.
class Formula {
 public:
  Kind kind() const { return node_->kind; }
  /// Atom name for Atom, agent id for Box/Diamond, empty otherwise.
  const std::string& label() const { return node_->label; }
  const Formula& child() const;  // Not, Box, Diamond
  const Formula& lhs() const;    // binary kinds
  const Formula& rhs() const;

  bool is_binary() const;
  bool is_modal() const { return kind() == Kind::Box || kind() == Kind::Diamond; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  friend Formula atom(std::string name);
  friend Formula neg(Formula f);
  friend Formula conj(Formula a, Formula b);
  friend Formula disj(Formula a, Formula b);
  friend Formula implies(Formula a, Formula b);
  friend Formula equiv(Formula a, Formula b);
  friend Formula box(std::string agent, Formula f);
  friend Formula diamond(std::string agent, Formula f);

 private:
  struct Node {
    Kind kind;
    std::string label;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string label, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

Formula atom(std::string name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula equiv(Formula a, Formula b);
Formula box(std::string agent, Formula f);
Formula diamond(std::string agent, Formula f);

/// Left-nested conjunction; throws std::invalid_argument on an empty list.
Formula conj_all(const std::vector<Formula>& fs);
Formula disj_all(const std::vector<Formula>& fs);

/// Nested boxes: boxes({"c","g","a"}, f) = [c][g][a]f.
Formula boxes(const std::vector<std::string>& agents, Formula f);

/// Atom names in first-occurrence order.
std::vector<std::string> atoms_of(const Formula& f);
/// Agent ids of modal operators in first-occurrence order.
std::vector<std::string> agents_of(const Formula& f);
std::size_t modal_depth(const Formula& f);
bool is_box_free(const Formula& f);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar, loosest first:
///   equiv   := implies ("<->" implies)*          left-assoc
///   implies := or ("->" implies)?                right-assoc
///   or      := and ("|" and)*
///   and     := unary ("&" unary)*
///   unary   := "~" unary | "[" id "]" unary | "<" id ">" unary | "(" equiv ")" | atom
///   atom    := id | id "[" raw "]" ("=" value)?
/// Whitespace inside atoms is dropped.
Formula parse(const std::string& text);

/// Minimal-parenthesis rendering; parse(to_string(f)) == f.
std::string to_string(const Formula& f);

}  // namespace frlogic::logic
