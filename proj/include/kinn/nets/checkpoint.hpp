#pragma once

#include <Eigen/Core>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kinn/common/check.hpp"
#include "kinn/nets/kan.hpp"
#include "kinn/nets/mlp.hpp"

namespace kinn {

// Flat text checkpoint: architecture header followed by one parameter per
// line at 17 significant digits, which round-trips doubles bit-exactly.
struct ModelCheckpoint {
  std::string kind;  // "kan" | "mlp"
  std::vector<int> dims;
  SplineGrid grid;  // kan only
  KanOptions kan_options;
  NormalizationBox box;
  Eigen::VectorXd params;

  static ModelCheckpoint of(const KanNetwork& net, const Eigen::VectorXd& p) {
    ModelCheckpoint c;
    c.kind = "kan";
    c.dims = net.dims();
    c.grid = net.grid();
    c.kan_options = net.options();
    c.box = net.box();
    c.params = p;
    return c;
  }

  static ModelCheckpoint of(const MlpNetwork& net, const Eigen::VectorXd& p) {
    ModelCheckpoint c;
    c.kind = "mlp";
    c.dims = net.dims();
    c.box = net.box();
    c.params = p;
    return c;
  }

  KanNetwork make_kan() const {
    require(kind == "kan", "ModelCheckpoint: not a kan checkpoint");
    return KanNetwork(dims, grid, kan_options, box);
  }
  MlpNetwork make_mlp() const {
    require(kind == "mlp", "ModelCheckpoint: not an mlp checkpoint");
    return MlpNetwork(dims, box);
  }
};

namespace detail {
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

inline void save_checkpoint(std::ostream& os, const ModelCheckpoint& c) {
  os << "kinn-model 1\n";
  os << "kind " << c.kind << "\n";
  os << "dims";
  for (int d : c.dims) os << ' ' << d;
  os << "\n";
  if (c.kind == "kan") {
    os << "grid " << detail::fmt17(c.grid.lo) << ' ' << detail::fmt17(c.grid.hi) << ' '
       << c.grid.size << ' ' << c.grid.order << "\n";
    os << "options " << (c.kan_options.squash_hidden ? 1 : 0) << ' '
       << (c.kan_options.use_base ? 1 : 0) << "\n";
  }
  os << "box " << detail::fmt17(c.box.L) << ' ' << detail::fmt17(c.box.W) << ' '
     << detail::fmt17(c.box.Xc) << ' ' << detail::fmt17(c.box.Yc) << "\n";
  os << "params " << c.params.size() << "\n";
  for (Eigen::Index i = 0; i < c.params.size(); ++i)
    os << detail::fmt17(c.params[i]) << "\n";
}

inline ModelCheckpoint load_checkpoint(std::istream& is) {
  ModelCheckpoint c;
  std::string tag, magic;
  int version = 0;
  is >> magic >> version;
  require(magic == "kinn-model" && version == 1, "load_checkpoint: bad header");
  is >> tag >> c.kind;
  require(tag == "kind", "load_checkpoint: expected kind");
  is >> tag;
  require(tag == "dims", "load_checkpoint: expected dims");
  {
    std::string rest;
    std::getline(is, rest);
    std::istringstream ds(rest);
    int d;
    while (ds >> d) c.dims.push_back(d);
  }
  is >> tag;
  if (tag == "grid") {
    is >> c.grid.lo >> c.grid.hi >> c.grid.size >> c.grid.order;
    is >> tag;
    require(tag == "options", "load_checkpoint: expected options");
    int squash = 1, base = 1;
    is >> squash >> base;
    c.kan_options.squash_hidden = squash != 0;
    c.kan_options.use_base = base != 0;
    is >> tag;
  }
  require(tag == "box", "load_checkpoint: expected box");
  is >> c.box.L >> c.box.W >> c.box.Xc >> c.box.Yc;
  is >> tag;
  require(tag == "params", "load_checkpoint: expected params");
  Eigen::Index n = 0;
  is >> n;
  c.params.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require(static_cast<bool>(is >> c.params[i]), "load_checkpoint: truncated params");
  }
  return c;
}

inline void save_checkpoint_file(const std::string& path, const ModelCheckpoint& c) {
  std::ofstream f(path);
  require(f.good(), "save_checkpoint_file: cannot open " + path);
  save_checkpoint(f, c);
}

inline ModelCheckpoint load_checkpoint_file(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "load_checkpoint_file: cannot open " + path);
  return load_checkpoint(f);
}

}  // namespace kinn
