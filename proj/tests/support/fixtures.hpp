#pragma once

#include <random>
#include <vector>

#include "synctl/comanche/library.hpp"
#include "synctl/compile.hpp"

namespace fixtures {

inline synctl::Valuation bools(
    std::initializer_list<std::pair<const char*, bool>> vals) {
  synctl::Valuation v;
  for (const auto& [k, b] : vals) v.emplace(k, synctl::Value::boolean(b));
  return v;
}

/// Random boolean valuation over the bindable flows of a node.
inline synctl::Valuation random_inputs(const synctl::CompiledNode& node,
                                       std::mt19937_64& rng) {
  synctl::Valuation v;
  auto fill = [&](const std::vector<int>& ids) {
    for (int id : ids) {
      const auto& fi = node.flow(id);
      switch (fi.type.kind) {
        case synctl::Kind::Bool:
          v.emplace(fi.name, synctl::Value::boolean(rng() & 1));
          break;
        case synctl::Kind::Enum:
          v.emplace(fi.name,
                    synctl::Value::symbol(
                        fi.type.enum_type,
                        static_cast<int>(rng() % fi.type.enum_type->symbols.size())));
          break;
        case synctl::Kind::Int: {
          int64_t lo = fi.type.ranged ? fi.type.lo : 0;
          int64_t hi = fi.type.ranged ? fi.type.hi : 8;
          v.emplace(fi.name, synctl::Value::integer(
                                 lo + static_cast<int64_t>(rng() % (hi - lo + 1))));
          break;
        }
      }
    }
  };
  fill(node.input_ids());
  fill(node.controllable_ids());
  return v;
}

}  // namespace fixtures
