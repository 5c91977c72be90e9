#include "rvmon/value.hpp"

#include <cctype>

namespace rvmon {

Rat parse_exact(const std::string& text) {
  if (text.empty()) throw ValueError("empty numeric literal");
  std::size_t pos = 0;
  bool negate = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negate = text[pos] == '-';
    ++pos;
  }
  if (pos >= text.size()) throw ValueError("sign without digits: '" + text + "'");

  auto digits = [&](std::size_t from, std::size_t to) {
    if (from == to) return false;
    for (std::size_t i = from; i < to; ++i)
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    return true;
  };

  std::size_t slash = text.find('/', pos);
  std::size_t dot = text.find('.', pos);
  Rat out;
  if (slash != std::string::npos) {
    if (dot != std::string::npos)
      throw ValueError("mixed '/' and '.' in literal: '" + text + "'");
    if (!digits(pos, slash) || !digits(slash + 1, text.size()))
      throw ValueError("malformed rational literal: '" + text + "'");
    Int num(text.substr(pos, slash - pos));
    Int den(text.substr(slash + 1));
    if (den == 0) throw ValueError("zero denominator: '" + text + "'");
    out = Rat(num) / Rat(den);
  } else if (dot != std::string::npos) {
    bool wok = pos == dot || digits(pos, dot);
    bool fok = dot + 1 == text.size() || digits(dot + 1, text.size());
    if (!wok || !fok || (pos == dot && dot + 1 == text.size()))
      throw ValueError("malformed decimal literal: '" + text + "'");
    std::string whole = text.substr(pos, dot - pos);
    std::string frac = text.substr(dot + 1);
    Int num(whole + frac);
    Int den(1);
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    out = Rat(num) / Rat(den);
  } else {
    if (!digits(pos, text.size()))
      throw ValueError("malformed integer literal: '" + text + "'");
    out = Rat(Int(text.substr(pos)));
  }
  out.canonicalize();
  if (negate) out = -out;
  return out;
}

std::string show_exact(const Rat& v) {
  Rat c = v;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

bool is_integral(const Rat& v) {
  Rat c = v;
  c.canonicalize();
  return c.get_den() == 1;
}

Int floor_div(const Rat& v) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
  return q;
}

Int euclid_mod(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace rvmon
