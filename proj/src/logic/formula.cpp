#include "frlogic/logic/formula.hpp"

#include <algorithm>
#include <cctype>

namespace frlogic::logic {

Formula Formula::make(Kind k, std::string label, std::vector<Formula> children) {
  return Formula(std::make_shared<const Node>(Node{k, std::move(label), std::move(children)}));
}

const Formula& Formula::child() const {
  if (kind() != Kind::Not && !is_modal()) throw std::logic_error("child() on a binary or atomic formula");
  return node_->children[0];
}

const Formula& Formula::lhs() const {
  if (!is_binary()) throw std::logic_error("lhs() on a non-binary formula");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (!is_binary()) throw std::logic_error("rhs() on a non-binary formula");
  return node_->children[1];
}

bool Formula::is_binary() const {
  switch (kind()) {
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Equiv:
      return true;
    default:
      return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.label() != b.label()) return false;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (ca[i] != cb[i]) return false;
  return true;
}

Formula atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  return Formula::make(Kind::Atom, std::move(name), {});
}
Formula neg(Formula f) { return Formula::make(Kind::Not, "", {std::move(f)}); }
Formula conj(Formula a, Formula b) { return Formula::make(Kind::And, "", {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return Formula::make(Kind::Or, "", {std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return Formula::make(Kind::Implies, "", {std::move(a), std::move(b)}); }
Formula equiv(Formula a, Formula b) { return Formula::make(Kind::Equiv, "", {std::move(a), std::move(b)}); }
Formula box(std::string agent, Formula f) {
  if (agent.empty()) throw std::invalid_argument("empty agent id");
  return Formula::make(Kind::Box, std::move(agent), {std::move(f)});
}
Formula diamond(std::string agent, Formula f) {
  if (agent.empty()) throw std::invalid_argument("empty agent id");
  return Formula::make(Kind::Diamond, std::move(agent), {std::move(f)});
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("conj_all of an empty list");
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("disj_all of an empty list");
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

Formula boxes(const std::vector<std::string>& agents, Formula f) {
  for (auto it = agents.rbegin(); it != agents.rend(); ++it) f = box(*it, std::move(f));
  return f;
}

namespace {

template <typename Pred>
void collect(const Formula& f, std::vector<std::string>& out, Pred pick) {
  if (pick(f) && std::find(out.begin(), out.end(), f.label()) == out.end()) out.push_back(f.label());
  if (f.kind() == Kind::Atom) return;
  if (f.is_binary()) {
    collect(f.lhs(), out, pick);
    collect(f.rhs(), out, pick);
  } else {
    collect(f.child(), out, pick);
  }
}

}  // namespace

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  collect(f, out, [](const Formula& g) { return g.kind() == Kind::Atom; });
  return out;
}

std::vector<std::string> agents_of(const Formula& f) {
  std::vector<std::string> out;
  collect(f, out, [](const Formula& g) { return g.is_modal(); });
  return out;
}

std::size_t modal_depth(const Formula& f) {
  if (f.kind() == Kind::Atom) return 0;
  if (f.is_binary()) return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  return modal_depth(f.child()) + (f.is_modal() ? 1 : 0);
}

bool is_box_free(const Formula& f) { return modal_depth(f) == 0; }

// --- parser ------------------------------------------------------------------

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Formula parse_all() {
    Formula f = parse_equiv();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const char* tok) {
    skip_ws();
    const std::size_t n = std::char_traits<char>::length(tok);
    if (s_.compare(pos_, n, tok) != 0) return false;
    // "<" must not swallow the "<->" connective.
    if (tok[0] == '<' && n == 1 && s_.compare(pos_, 3, "<->") == 0) return false;
    pos_ += n;
    return true;
  }

  void expect(const char* tok) {
    if (!accept(tok)) fail(std::string("expected '") + tok + "'");
  }

  std::string identifier() {
    skip_ws();
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Formula parse_equiv() {
    Formula f = parse_implies();
    while (accept("<->")) f = equiv(f, parse_implies());
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (accept("->")) return implies(f, parse_implies());
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept("~")) return neg(parse_unary());
    if (accept("[")) {
      std::string agent = identifier();
      expect("]");
      return box(std::move(agent), parse_unary());
    }
    if (accept("<")) {
      std::string agent = identifier();
      expect(">");
      return diamond(std::move(agent), parse_unary());
    }
    if (accept("(")) {
      Formula f = parse_equiv();
      expect(")");
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    std::string name = identifier();
    if (pos_ < s_.size() && s_[pos_] == '[') {
      const std::size_t open = pos_++;
      std::string body;
      while (pos_ < s_.size() && s_[pos_] != ']') {
        const char c = s_[pos_++];
        if (c == '[' || c == '(' || c == ')') {
          --pos_;
          fail(std::string("unexpected '") + c + "' inside atom brackets");
        }
        if (!std::isspace(static_cast<unsigned char>(c))) body += c;
      }
      if (pos_ >= s_.size()) {
        pos_ = open;
        fail("unterminated '[' in atom");
      }
      ++pos_;
      if (body.empty()) fail("empty atom brackets");
      name += "[" + body + "]";
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '=') {
        ++pos_;
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (ident_char(s_[pos_]) || s_[pos_] == '+' || s_[pos_] == '-')) {
          if (s_[pos_] == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') break;
          ++pos_;
        }
        if (pos_ == start) fail("expected value after '='");
        name += "=" + s_.substr(start, pos_ - start);
      }
    }
    return atom(std::move(name));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

int precedence(Kind k) {
  switch (k) {
    case Kind::Equiv:
      return 1;
    case Kind::Implies:
      return 2;
    case Kind::Or:
      return 3;
    case Kind::And:
      return 4;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond:
      return 5;
    case Kind::Atom:
      return 6;
  }
  return 0;
}

const char* symbol(Kind k) {
  switch (k) {
    case Kind::Equiv:
      return " <-> ";
    case Kind::Implies:
      return " -> ";
    case Kind::Or:
      return " | ";
    case Kind::And:
      return " & ";
    default:
      return "";
  }
}

void print(const Formula& f, std::string& out) {
  auto wrapped = [&](const Formula& g, bool parens) {
    if (parens) out += '(';
    print(g, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case Kind::Atom:
      out += f.label();
      return;
    case Kind::Not:
      out += '~';
      wrapped(f.child(), precedence(f.child().kind()) < 5);
      return;
    case Kind::Box:
      out += "[" + f.label() + "]";
      wrapped(f.child(), precedence(f.child().kind()) < 5);
      return;
    case Kind::Diamond:
      out += "<" + f.label() + ">";
      wrapped(f.child(), precedence(f.child().kind()) < 5);
      return;
    default:
      break;
  }
  const int p = precedence(f.kind());
  const bool right_assoc = f.kind() == Kind::Implies;
  const int pl = precedence(f.lhs().kind());
  const int pr = precedence(f.rhs().kind());
  wrapped(f.lhs(), pl < p || (pl == p && right_assoc));
  out += symbol(f.kind());
  wrapped(f.rhs(), pr < p || (pr == p && !right_assoc));
}

}  // namespace

Formula parse(const std::string& text) { return Parser(text).parse_all(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace frlogic::logic
