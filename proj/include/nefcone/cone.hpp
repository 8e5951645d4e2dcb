#pragma once

#include <string>
#include <vector>

#include "nefcone/lattice_forms.hpp"

namespace nefcone {

// Rational polyhedral cone spanned by primitive integral forms.
class Cone {
 public:
  Cone() = default;
  Cone(std::string name, int dim, std::vector<forms::QuadForm> generators);
  Cone(std::string name, std::vector<forms::QuadForm> generators);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int ambient_rank() const { return forms::coord_count(dim_); }
  std::size_t size() const { return gens_.size(); }
  const std::vector<forms::QuadForm>& generators() const { return gens_; }
  const forms::QuadForm& operator[](std::size_t i) const { return gens_[i]; }

  // Position of the ray through q (compared by primitive generator), or -1.
  int index_of(const forms::QuadForm& q) const;
  Cone subcone(const std::string& name, const std::vector<int>& indices) const;
  Cone with(const std::string& name, const forms::QuadForm& extra) const;
  RatMatrix generator_matrix() const;  // one row per generator

 private:
  std::string name_;
  int dim_ = 0;
  std::vector<forms::QuadForm> gens_;
};

// A subset of a parent cone's generators, 0-based and sorted.
struct FaceLabel {
  std::string parent;
  std::vector<int> indices;
  std::string orbit_tag;

  bool operator==(const FaceLabel& o) const { return parent == o.parent && indices == o.indices; }
  bool operator<(const FaceLabel& o) const { return indices < o.indices; }
};

}  // namespace nefcone
