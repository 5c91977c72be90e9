#include "rvmon/parse.hpp"

#include <cctype>
#include <vector>

namespace rvmon {

namespace {

enum class Tk {
  Ident,
  Num,
  LPar,
  RPar,
  Semi,
  Plus,
  Minus,
  Star,
  Slash,
  AndAnd,
  OrOr,
  Not,
  Arrow,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  ModEq,
  ModNe,
  KwInt,
  KwRat,
  KwTrue,
  KwFalse,
  KwG,
  KwF,
  KwX,
  KwWX,
  KwU,
  KwStrict,
  End,
};

struct Token {
  Tk kind;
  std::string text;  // Ident: name; Num: literal; ModEq/ModNe: modulus digits
  int primes = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { run(); }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line_, col_);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char get() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void push(Tk k, std::string text = "", int primes = 0) {
    toks_.push_back(Token{k, std::move(text), primes, tline_, tcol_});
  }

  std::string digits() {
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(peek()))) d += get();
    return d;
  }

  void run() {
    while (pos_ < s_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
        continue;
      }
      if (c == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        while (pos_ < s_.size() && peek() != '\n') get();
        continue;
      }
      tline_ = line_;
      tcol_ = col_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::string num = digits();
        if (peek() == '.') {
          num += get();
          num += digits();
        }
        if (num == ".") fail("malformed number");
        push(Tk::Num, num);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (std::isalnum(static_cast<unsigned char>(peek())) ||
               peek() == '_')
          id += get();
        if (id == "int") push(Tk::KwInt);
        else if (id == "rat") push(Tk::KwRat);
        else if (id == "true") push(Tk::KwTrue);
        else if (id == "false") push(Tk::KwFalse);
        else if (id == "G") push(Tk::KwG);
        else if (id == "F") push(Tk::KwF);
        else if (id == "X") push(Tk::KwX);
        else if (id == "wX") push(Tk::KwWX);
        else if (id == "U") push(Tk::KwU);
        else if (id == "strict") push(Tk::KwStrict);
        else {
          int primes = 0;
          while (peek() == '\'') {
            get();
            ++primes;
          }
          push(Tk::Ident, id, primes);
        }
        continue;
      }
      get();
      switch (c) {
        case '(': push(Tk::LPar); break;
        case ')': push(Tk::RPar); break;
        case ';': push(Tk::Semi); break;
        case '+': push(Tk::Plus); break;
        case '*': push(Tk::Star); break;
        case '/': push(Tk::Slash); break;
        case '-':
          if (peek() == '>') {
            get();
            push(Tk::Arrow);
          } else {
            push(Tk::Minus);
          }
          break;
        case '&':
          if (peek() != '&') fail("expected '&&'");
          get();
          push(Tk::AndAnd);
          break;
        case '|':
          if (peek() != '|') fail("expected '||'");
          get();
          push(Tk::OrOr);
          break;
        case '=':
          if (peek() == '_') {
            get();
            std::string d = digits();
            if (d.empty()) fail("expected modulus digits after '=_'");
            push(Tk::ModEq, d);
          } else {
            push(Tk::Eq);
          }
          break;
        case '!':
          if (peek() == '=') {
            get();
            if (peek() == '_') {
              get();
              std::string d = digits();
              if (d.empty()) fail("expected modulus digits after '!=_'");
              push(Tk::ModNe, d);
            } else {
              push(Tk::Ne);
            }
          } else {
            push(Tk::Not);
          }
          break;
        case '<':
          if (peek() == '=') {
            get();
            push(Tk::Le);
          } else {
            push(Tk::Lt);
          }
          break;
        case '>':
          if (peek() == '=') {
            get();
            push(Tk::Ge);
          } else {
            push(Tk::Gt);
          }
          break;
        default:
          fail(std::string("unexpected character '") + c + "'");
      }
    }
    tline_ = line_;
    tcol_ = col_;
    push(Tk::End);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  int tline_ = 1, tcol_ = 1;
  std::vector<Token> toks_;
};

/* Surface tree: keeps negation and implication until the final polarity
 * pass, so literals come out weak or strong as their context requires. */
struct SNode {
  enum K { True, False, Atom, Not, And, Or, Imp, Xs, Xw, U, G, F, Strict } k;
  AtomId atom = -1;
  std::vector<int> kids;
};

class Parser {
 public:
  Parser(Workspace& ws, const std::string& text)
      : ws_(ws), toks_(Lexer(text).tokens()) {}

  FRef run() {
    parse_decls();
    if (ws_.vars.var_count() == 0)
      fail("expected at least one variable declaration");
    int root = parse_formula();
    expect(Tk::End, "end of input");
    return nnf(root, true);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = toks_[pos_ < toks_.size() ? pos_ : toks_.size() - 1];
    throw ParseError(msg, t.line, t.col);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& get() { return toks_[pos_++]; }
  bool accept(Tk k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(Tk k, const std::string& what) {
    if (!accept(k)) fail("expected " + what);
  }

  int add(SNode n) {
    pool_.push_back(std::move(n));
    return static_cast<int>(pool_.size() - 1);
  }

  /* ---------------------------------------------------------- declarations */

  void parse_decls() {
    while (peek().kind == Tk::KwInt || peek().kind == Tk::KwRat) {
      Sort sort = get().kind == Tk::KwInt ? Sort::Int : Sort::Rat;
      if (peek().kind != Tk::Ident) fail("expected variable name");
      Token t = get();
      if (t.primes) fail("variable declaration cannot carry primes");
      if (t.text.rfind("__la_", 0) == 0)
        fail("variable names starting with '__la_' are reserved");
      if (ws_.vars.find(t.text))
        fail("variable '" + t.text + "' already declared");
      ws_.vars.declare(t.text, sort);
      expect(Tk::Semi, "';' after declaration");
    }
  }

  /* -------------------------------------------------------------- formulas */

  int parse_formula() { return parse_imp(); }

  int parse_imp() {
    int lhs = parse_or();
    if (accept(Tk::Arrow)) {
      int rhs = parse_imp();
      return add(SNode{SNode::Imp, -1, {lhs, rhs}});
    }
    return lhs;
  }

  int parse_or() {
    int lhs = parse_and();
    while (accept(Tk::OrOr)) {
      int rhs = parse_and();
      lhs = add(SNode{SNode::Or, -1, {lhs, rhs}});
    }
    return lhs;
  }

  int parse_and() {
    int lhs = parse_until();
    while (accept(Tk::AndAnd)) {
      int rhs = parse_until();
      lhs = add(SNode{SNode::And, -1, {lhs, rhs}});
    }
    return lhs;
  }

  int parse_until() {
    int lhs = parse_unary();
    if (accept(Tk::KwU)) {
      int rhs = parse_until();
      return add(SNode{SNode::U, -1, {lhs, rhs}});
    }
    return lhs;
  }

  int parse_unary() {
    switch (peek().kind) {
      case Tk::Not:
        get();
        return add(SNode{SNode::Not, -1, {parse_unary()}});
      case Tk::KwG:
        get();
        return add(SNode{SNode::G, -1, {parse_unary()}});
      case Tk::KwF:
        get();
        return add(SNode{SNode::F, -1, {parse_unary()}});
      case Tk::KwX:
        get();
        return add(SNode{SNode::Xs, -1, {parse_unary()}});
      case Tk::KwWX:
        get();
        return add(SNode{SNode::Xw, -1, {parse_unary()}});
      case Tk::KwTrue:
        get();
        return add(SNode{SNode::True, -1, {}});
      case Tk::KwFalse:
        get();
        return add(SNode{SNode::False, -1, {}});
      case Tk::KwStrict: {
        get();
        expect(Tk::LPar, "'(' after strict");
        int body = parse_formula();
        expect(Tk::RPar, "')'");
        check_temporal_free(body);
        return add(SNode{SNode::Strict, -1, {body}});
      }
      case Tk::LPar: {
        // Either a parenthesized arithmetic side of an atom or a
        // parenthesized formula; try the atom reading first and fall back.
        // When both readings fail, report the error that got further.
        std::size_t save = pos_;
        try {
          return parse_atom();
        } catch (const ParseError& atom_err) {
          pos_ = save;
          try {
            get();
            int inner = parse_formula();
            expect(Tk::RPar, "')'");
            return inner;
          } catch (const ParseError& form_err) {
            bool atom_further =
                atom_err.line > form_err.line ||
                (atom_err.line == form_err.line && atom_err.col > form_err.col);
            throw atom_further ? atom_err : form_err;
          }
        }
      }
      case Tk::Ident:
      case Tk::Num:
      case Tk::Minus:
        return parse_atom();
      default:
        fail("expected a formula");
    }
  }

  void check_temporal_free(int n) {
    const SNode& sn = pool_[n];
    switch (sn.k) {
      case SNode::Xs:
      case SNode::Xw:
      case SNode::U:
      case SNode::G:
      case SNode::F:
      case SNode::Strict:
        fail("strict(...) takes a temporal-free formula");
      default:
        for (int k : sn.kids) check_temporal_free(k);
    }
  }

  /* ----------------------------------------------------------------- atoms */

  int parse_atom() {
    Token start = peek();
    LinExpr lhs = parse_expr();
    Tk rel = peek().kind;
    std::string modtext;
    switch (rel) {
      case Tk::Eq:
      case Tk::Ne:
      case Tk::Lt:
      case Tk::Le:
      case Tk::Gt:
      case Tk::Ge:
        get();
        break;
      case Tk::ModEq:
      case Tk::ModNe:
        modtext = get().text;
        break;
      default:
        fail("expected a relational operator");
    }
    LinExpr rhs = parse_expr();
    AtomOrConst made;
    try {
      switch (rel) {
        case Tk::Eq: made = ws_.atoms.make(lhs, CmpOp::Eq, rhs, 0); break;
        case Tk::Ne: made = ws_.atoms.make(lhs, CmpOp::Ne, rhs, 0); break;
        case Tk::Lt: made = ws_.atoms.make(lhs, CmpOp::Lt, rhs, 0); break;
        case Tk::Le: made = ws_.atoms.make(lhs, CmpOp::Le, rhs, 0); break;
        case Tk::Gt: made = ws_.atoms.make(rhs, CmpOp::Lt, lhs, 0); break;
        case Tk::Ge: made = ws_.atoms.make(rhs, CmpOp::Le, lhs, 0); break;
        case Tk::ModEq:
          made = ws_.atoms.make(lhs, CmpOp::ModEq, rhs, Int(modtext));
          break;
        case Tk::ModNe:
          made = ws_.atoms.make(lhs, CmpOp::ModNe, rhs, Int(modtext));
          break;
        default:
          fail("expected a relational operator");
      }
    } catch (const ValueError& e) {
      throw ParseError(e.what(), start.line, start.col);
    }
    if (!made.atom)
      return add(SNode{made.constant ? SNode::True : SNode::False, -1, {}});
    return add(SNode{SNode::Atom, *made.atom, {}});
  }

  LinExpr parse_expr() {
    LinExpr acc = parse_term();
    for (;;) {
      if (accept(Tk::Plus)) {
        acc.add_scaled(parse_term(), Rat(1));
      } else if (accept(Tk::Minus)) {
        acc.add_scaled(parse_term(), Rat(-1));
      } else {
        return acc;
      }
    }
  }

  LinExpr parse_term() {
    LinExpr acc = parse_factor();
    for (;;) {
      if (accept(Tk::Star)) {
        LinExpr rhs = parse_factor();
        acc = multiply(acc, rhs);
      } else if (accept(Tk::Slash)) {
        LinExpr rhs = parse_factor();
        if (!rhs.coeffs.empty()) fail("division by a variable");
        if (rhs.cst == 0) fail("division by zero");
        for (auto& [t, c] : acc.coeffs) c /= rhs.cst;
        acc.cst /= rhs.cst;
      } else {
        return acc;
      }
    }
  }

  LinExpr multiply(const LinExpr& a, const LinExpr& b) {
    if (!a.coeffs.empty() && !b.coeffs.empty())
      fail("nonlinear term: product of two variables");
    const LinExpr& konst = a.coeffs.empty() ? a : b;
    const LinExpr& other = a.coeffs.empty() ? b : a;
    LinExpr out;
    out.add_scaled(other, konst.cst);
    return out;
  }

  LinExpr parse_factor() {
    if (accept(Tk::Minus)) {
      LinExpr e = parse_factor();
      for (auto& [t, c] : e.coeffs) c = -c;
      e.cst = -e.cst;
      return e;
    }
    if (peek().kind == Tk::Num) {
      LinExpr e;
      e.add_const(parse_exact(get().text));
      return e;
    }
    if (peek().kind == Tk::Ident) {
      Token t = get();
      auto v = ws_.vars.find(t.text);
      if (!v) fail("undeclared variable '" + t.text + "'");
      LinExpr e;
      Role role = t.primes > 0 ? Role::Look : Role::Cur;
      e.add_term(ws_.vars.term(*v, role, t.primes), Rat(1));
      return e;
    }
    if (accept(Tk::LPar)) {
      LinExpr e = parse_expr();
      expect(Tk::RPar, "')'");
      return e;
    }
    fail("expected a number, variable, or parenthesized expression");
  }

  /* ------------------------------------------------- negation normal form */

  int strict_depth(int n) {
    const SNode& sn = pool_[n];
    if (sn.k == SNode::Atom) {
      auto band = ws_.atoms.offset_band(sn.atom);
      return band ? std::max(0, band->second) : 0;
    }
    int d = 0;
    for (int k : sn.kids) d = std::max(d, strict_depth(k));
    return d;
  }

  FRef nnf(int n, bool pos) {
    FormulaTable& F = ws_.formulas;
    const SNode sn = pool_[n];  // copy: pool_ may grow during recursion
    switch (sn.k) {
      case SNode::True:
        return pos ? F.top() : F.bottom();
      case SNode::False:
        return pos ? F.bottom() : F.top();
      case SNode::Atom:
        return pos ? F.atom(sn.atom) : F.natom(sn.atom);
      case SNode::Not:
        return nnf(sn.kids[0], !pos);
      case SNode::And: {
        FRef a = nnf(sn.kids[0], pos);
        FRef b = nnf(sn.kids[1], pos);
        return pos ? F.con({a, b}) : F.dis({a, b});
      }
      case SNode::Or: {
        FRef a = nnf(sn.kids[0], pos);
        FRef b = nnf(sn.kids[1], pos);
        return pos ? F.dis({a, b}) : F.con({a, b});
      }
      case SNode::Imp: {
        FRef a = nnf(sn.kids[0], !pos);
        FRef b = nnf(sn.kids[1], pos);
        return pos ? F.dis({a, b}) : F.con({a, b});
      }
      case SNode::Xs: {
        FRef a = nnf(sn.kids[0], pos);
        return pos ? F.xs(a) : F.xw(a);
      }
      case SNode::Xw: {
        FRef a = nnf(sn.kids[0], pos);
        return pos ? F.xw(a) : F.xs(a);
      }
      case SNode::G: {
        FRef a = nnf(sn.kids[0], pos);
        return pos ? F.globally(a) : F.eventually(a);
      }
      case SNode::F: {
        FRef a = nnf(sn.kids[0], pos);
        return pos ? F.eventually(a) : F.globally(a);
      }
      case SNode::U: {
        if (pos) {
          FRef a = nnf(sn.kids[0], true);
          FRef b = nnf(sn.kids[1], true);
          return F.until(a, b);
        }
        // not (a U b)  ==  G !b  ||  !b U (!a && !b)
        FRef na = nnf(sn.kids[0], false);
        FRef nb = nnf(sn.kids[1], false);
        return F.dis({F.globally(nb), F.until(nb, F.con({na, nb}))});
      }
      case SNode::Strict: {
        // strict(e) = e plus "the instants e reads ahead to all exist".
        int depth = strict_depth(sn.kids[0]);
        FRef body = nnf(sn.kids[0], pos);
        FRef live = F.top();
        for (int i = 0; i < depth; ++i) live = F.xs(live);
        if (pos) return F.con({body, live});
        return F.dis({body, nnf_neg_next(live)});
      }
    }
    fail("internal: unhandled surface node");
  }

  /* Negate a chain X (X (... true)) into wX (wX (... false)). */
  FRef nnf_neg_next(FRef f) {
    FormulaTable& F = ws_.formulas;
    if (f == F.top()) return F.bottom();
    return F.xw(nnf_neg_next(F.at(f).kids[0]));
  }

  Workspace& ws_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<SNode> pool_;
};

}  // namespace

FRef parse_property(Workspace& ws, const std::string& text) {
  Parser p(ws, text);
  return p.run();
}

}  // namespace rvmon
