#include "rvmon/vars.hpp"

#include <stdexcept>

namespace rvmon {

VarIdx VarTable::declare(const std::string& name, Sort sort) {
  if (find(name)) throw std::runtime_error("duplicate variable: " + name);
  names_.push_back(name);
  sorts_.push_back(sort);
  derivations_.emplace_back();
  return static_cast<VarIdx>(names_.size() - 1);
}

VarIdx VarTable::declare_derived(const std::string& name, Sort sort,
                                 VarIdx source, int shift) {
  VarIdx v = declare(name, sort);
  derivations_.back() = Derivation{source, shift};
  return v;
}

std::optional<VarIdx> VarTable::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<VarIdx>(i);
  return std::nullopt;
}

std::vector<VarIdx> VarTable::source_vars() const {
  std::vector<VarIdx> out;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!derivations_[i]) out.push_back(static_cast<VarIdx>(i));
  return out;
}

TermId VarTable::term(VarIdx v, Role role, int look) {
  if (role != Role::Look) look = 0;
  TermId t = find_term(v, role, look);
  if (t >= 0) return t;
  terms_.push_back(TermInfo{v, role, look});
  t = static_cast<TermId>(terms_.size() - 1);
  index_.push_back({{v, role, look}, t});
  return t;
}

TermId VarTable::find_term(VarIdx v, Role role, int look) const {
  if (role != Role::Look) look = 0;
  for (const auto& [key, id] : index_)
    if (key.var == v && key.role == role && key.look == look) return id;
  return -1;
}

std::string VarTable::term_name(TermId t, int style) const {
  const TermInfo& ti = terms_[t];
  const std::string& base = names_[ti.var];
  switch (ti.role) {
    case Role::Look: {
      std::string s = base;
      for (int i = 0; i < ti.look; ++i) s += '\'';
      return s;
    }
    case Role::Pre:
      return style == kStyleLetter ? base : base + "_pre";
    case Role::Cur:
      if (style == kStyleLetter) return base + "'";
      if (style == kStyleBanded) return base + "_cur";
      return base;  // surface and state views use the bare name
    case Role::Init:
      return base + "0";
    case Role::Tmp:
      return "u_" + base;
  }
  return base + "?";
}

}  // namespace rvmon
