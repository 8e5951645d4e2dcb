#include "nefcone/cone.hpp"

#include <algorithm>

namespace nefcone {

Cone::Cone(std::string name, int dim, std::vector<forms::QuadForm> generators)
    : name_(std::move(name)), dim_(dim), gens_(std::move(generators)) {
  if (dim_ < 1 || dim_ > forms::kMaxDim) throw InputError("cone dimension must be in 1..4");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    if (g.dim() != dim_) throw InputError("cone '" + name_ + "': generator dimension mismatch");
    if (g.is_zero()) throw InputError("cone '" + name_ + "': zero generator");
    if (!g.is_integral() || g.content() != 1)
      throw InputError("cone '" + name_ + "': generator " + std::to_string(i + 1) + " is not primitive integral");
    for (std::size_t j = 0; j < i; ++j)
      if (gens_[j] == g) throw InputError("cone '" + name_ + "': duplicate generator");
  }
}

namespace {
int first_dim(const std::vector<forms::QuadForm>& g) {
  if (g.empty()) throw InputError("cone without generators needs an explicit dimension");
  return g.front().dim();
}
}  // namespace

Cone::Cone(std::string name, std::vector<forms::QuadForm> generators)
    : Cone(name, first_dim(generators), generators) {}

int Cone::index_of(const forms::QuadForm& q) const {
  if (q.dim() != dim_ || q.is_zero()) return -1;
  forms::QuadForm p = q.primitive();
  for (std::size_t k = 0; k < p.coords().size(); ++k)
    if (p.coords()[k] != 0) {
      if ((p.coords()[k] > 0) != (q.coords()[k] > 0)) return -1;
      break;
    }
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == p) return static_cast<int>(i);
  return -1;
}

Cone Cone::subcone(const std::string& name, const std::vector<int>& indices) const {
  std::vector<forms::QuadForm> g;
  for (int i : indices) {
    if (i < 0 || i >= static_cast<int>(gens_.size())) throw InputError("subcone index out of range");
    g.push_back(gens_[i]);
  }
  return Cone(name, dim_, g);
}

Cone Cone::with(const std::string& name, const forms::QuadForm& extra) const {
  auto g = gens_;
  g.push_back(extra.primitive());
  return Cone(name, dim_, g);
}

RatMatrix Cone::generator_matrix() const {
  RatMatrix m;
  for (const auto& g : gens_) m.push_back(g.coords());
  return m;
}

}  // namespace nefcone
