#include "smp/dof.hpp"

#include <algorithm>
#include <stdexcept>

namespace smp {

void ConstraintSet::add(int dof, PiecewiseLinear program, double t_release) {
  if (has(dof))
    throw std::invalid_argument("dof " + std::to_string(dof) +
                                " constrained twice");
  constraints_.push_back({dof, std::move(program), t_release});
}

void ConstraintSet::add_fixed(int dof, double value, double t_release) {
  add(dof, PiecewiseLinear::constant(value), t_release);
}

bool ConstraintSet::has(int dof) const {
  return std::any_of(constraints_.begin(), constraints_.end(),
                     [dof](const Constraint& c) { return c.dof == dof; });
}

ConstraintSet::Active ConstraintSet::active(double t) const {
  std::vector<std::pair<int, double>> entries;
  entries.reserve(constraints_.size());
  for (const Constraint& c : constraints_) {
    if (t < c.t_release) entries.emplace_back(c.dof, c.value(t));
  }
  std::sort(entries.begin(), entries.end());
  Active a;
  a.dofs.reserve(entries.size());
  a.values.reserve(entries.size());
  for (const auto& [dof, val] : entries) {
    a.dofs.push_back(dof);
    a.values.push_back(val);
  }
  return a;
}

ReducedMap build_reduced_map(int total, const ConstraintSet::Active& a) {
  ReducedMap m;
  m.full_to_red.assign(total, 0);
  for (int dof : a.dofs) {
    if (dof < 0 || dof >= total)
      throw std::out_of_range("constraint on nonexistent dof " +
                              std::to_string(dof));
    m.full_to_red[dof] = -1;
  }
  m.red_to_full.reserve(total - static_cast<int>(a.dofs.size()));
  for (int i = 0; i < total; ++i) {
    if (m.full_to_red[i] == 0) {
      m.full_to_red[i] = m.n_red++;
      m.red_to_full.push_back(i);
    }
  }
  return m;
}

void impose_values(VecX& v, const ConstraintSet::Active& a) {
  for (std::size_t i = 0; i < a.dofs.size(); ++i) v[a.dofs[i]] = a.values[i];
}

ReducedSystem apply_dirichlet(const std::vector<Triplet>& K_triplets,
                              const VecX& b, const ConstraintSet::Active& a,
                              const ReducedMap& map) {
  const int total = static_cast<int>(map.full_to_red.size());
  VecX x_c = VecX::Zero(total);
  for (std::size_t i = 0; i < a.dofs.size(); ++i) x_c[a.dofs[i]] = a.values[i];

  ReducedSystem out;
  out.b = VecX::Zero(map.n_red);
  for (int i = 0; i < total; ++i) {
    if (map.full_to_red[i] >= 0) out.b[map.full_to_red[i]] = b[i];
  }
  std::vector<Triplet> red;
  red.reserve(K_triplets.size());
  for (const Triplet& t : K_triplets) {
    const int r = map.full_to_red[t.row()];
    const int c = map.full_to_red[t.col()];
    if (r < 0) continue;
    if (c < 0) {
      out.b[r] -= t.value() * x_c[t.col()];
    } else {
      red.emplace_back(r, c, t.value());
    }
  }
  out.K.resize(map.n_red, map.n_red);
  out.K.setFromTriplets(red.begin(), red.end());
  return out;
}

VecX expand_solution(const VecX& x_red, const ConstraintSet::Active& a,
                     const ReducedMap& map) {
  VecX x = VecX::Zero(map.full_to_red.size());
  for (int r = 0; r < map.n_red; ++r) x[map.red_to_full[r]] = x_red[r];
  for (std::size_t i = 0; i < a.dofs.size(); ++i) x[a.dofs[i]] = a.values[i];
  return x;
}

}  // namespace smp
