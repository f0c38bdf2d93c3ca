#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "synctl/errors.hpp"

namespace synctl {

/// A declared finite enumeration. Shared between the flows typed with it;
/// identity is by name + symbol list.
struct EnumType {
  std::string name;
  std::vector<std::string> symbols;

  int index_of(const std::string& sym) const {
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i] == sym) return static_cast<int>(i);
    return -1;
  }
};

using EnumTypePtr = std::shared_ptr<const EnumType>;

inline bool same_enum(const EnumTypePtr& a, const EnumTypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->name == b->name && a->symbols == b->symbols;
}

/// The built-in processing-element id enumeration {pe0..pe3}.
inline const EnumTypePtr& peid_type() {
  static const EnumTypePtr t = std::make_shared<EnumType>(
      EnumType{"peid", {"pe0", "pe1", "pe2", "pe3"}});
  return t;
}

enum class Kind : uint8_t { Bool, Int, Enum };

/// Flow type. Integers may carry an inclusive range; only ranged integers
/// have a finite domain for reachability and synthesis.
struct Type {
  Kind kind = Kind::Bool;
  EnumTypePtr enum_type;           // Kind::Enum only
  bool ranged = false;             // Kind::Int only
  int64_t lo = 0, hi = 0;

  static Type boolean() { return Type{Kind::Bool, nullptr, false, 0, 0}; }
  static Type integer() { return Type{Kind::Int, nullptr, false, 0, 0}; }
  static Type integer(int64_t lo, int64_t hi) {
    return Type{Kind::Int, nullptr, true, lo, hi};
  }
  static Type enumeration(EnumTypePtr e) {
    return Type{Kind::Enum, std::move(e), false, 0, 0};
  }

  bool finite() const { return kind != Kind::Int || ranged; }
  int64_t domain_size() const {
    switch (kind) {
      case Kind::Bool: return 2;
      case Kind::Enum: return static_cast<int64_t>(enum_type->symbols.size());
      case Kind::Int: return ranged ? hi - lo + 1 : -1;
    }
    return -1;
  }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Enum) return same_enum(a.enum_type, b.enum_type);
    if (a.kind == Kind::Int)
      return a.ranged == b.ranged && (!a.ranged || (a.lo == b.lo && a.hi == b.hi));
    return true;
  }
};

/// Saturation bounds for integer flows (workload sums must not trap).
inline constexpr int64_t kIntMax = std::numeric_limits<int32_t>::max();
inline constexpr int64_t kIntMin = -kIntMax;

inline int64_t saturate(int64_t v) {
  if (v > kIntMax) return kIntMax;
  if (v < kIntMin) return kIntMin;
  return v;
}

/// A runtime value: boolean, bounded integer, or enum symbol.
struct Value {
  Kind kind = Kind::Bool;
  int64_t num = 0;        // bool: 0/1, int: value, enum: symbol index
  EnumTypePtr enum_type;  // Kind::Enum only

  Value() = default;
  static Value boolean(bool b) { return Value{Kind::Bool, b ? 1 : 0, nullptr}; }
  static Value integer(int64_t v) { return Value{Kind::Int, saturate(v), nullptr}; }
  static Value symbol(EnumTypePtr e, int idx) {
    return Value{Kind::Enum, idx, std::move(e)};
  }
  static Value symbol(const EnumTypePtr& e, const std::string& name) {
    int idx = e->index_of(name);
    if (idx < 0) throw TypeMismatchError("no symbol " + name + " in enum " + e->name);
    return symbol(e, idx);
  }

  bool as_bool() const {
    if (kind != Kind::Bool) throw TypeMismatchError("expected bool value");
    return num != 0;
  }
  int64_t as_int() const {
    if (kind != Kind::Int) throw TypeMismatchError("expected int value");
    return num;
  }
  const std::string& symbol_name() const {
    if (kind != Kind::Enum) throw TypeMismatchError("expected enum value");
    return enum_type->symbols[static_cast<size_t>(num)];
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Bool: return num ? "true" : "false";
      case Kind::Int: return std::to_string(num);
      case Kind::Enum: return symbol_name();
    }
    return "?";
  }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind || a.num != b.num) return false;
    if (a.kind == Kind::Enum) return same_enum(a.enum_type, b.enum_type);
    return true;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
};

/// A finite map from flow names to values. Ordered so that printing and
/// iteration are deterministic.
using Valuation = std::map<std::string, Value>;

inline const Value& lookup(const Valuation& env, const std::string& name) {
  auto it = env.find(name);
  if (it == env.end()) throw UnboundFlowError(name);
  return it->second;
}

}  // namespace synctl
