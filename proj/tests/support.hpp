#pragma once

#include "borromean/atom.hpp"

namespace test_support {

// One shared model for the whole test binary; polarizabilities are memoised.
inline const borromean::AtomicPhysics& physics() {
  static const borromean::AtomicPhysics p(borromean::load_atom_model(borromean::default_atom_data_path()));
  return p;
}

inline const borromean::AtomModel& model() { return physics().model(); }

}  // namespace test_support
