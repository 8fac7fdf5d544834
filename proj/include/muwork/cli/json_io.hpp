// Copyright 2026 The muwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON encoding of matrices, channels, algebras, correlation matrices and
// decompositions. Complex matrices are {"re": rows, "im": rows}.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muwork/algebra.hpp"
#include "muwork/correlation.hpp"
#include "muwork/decomposition.hpp"
#include "muwork/named.hpp"

namespace muwork::cli {

using json = nlohmann::ordered_json;

/// Three significant figures, e.g. "7.19e-16".
inline std::string sig3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

/// Raw value alongside its 3-significant-figure rendering.
inline json residual_json(double x) { return json{{"raw", x}, {"sig3", sig3(x)}}; }

inline json matrix_to_json(const CMat& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline json vector_to_json(const CVec& v) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline json complex_list_to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(json{{"re", z.real()}, {"im", z.imag()}});
  return out;
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { fail(ErrorKind::parse, what); }

inline const json& field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) parse_fail(ctx + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline double number(const json& j, const std::string& ctx) {
  if (!j.is_number()) parse_fail(ctx + ": expected a number");
  return j.get<double>();
}

inline RMat real_rows(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) parse_fail(ctx + ": expected a non-empty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) parse_fail(ctx + ": rows must be non-empty arrays");
  RMat out(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) parse_fail(ctx + ": matrix is not rectangular");
    for (std::size_t c = 0; c < cols; ++c) out(static_cast<Index>(i), static_cast<Index>(c)) = number(j[i][c], ctx);
  }
  return out;
}

}  // namespace detail

inline CMat matrix_from_json(const json& j, const std::string& ctx) {
  const RMat re = detail::real_rows(detail::field(j, "re", ctx), ctx + ".re");
  RMat im = RMat::Zero(re.rows(), re.cols());
  if (j.contains("im")) im = detail::real_rows(j.at("im"), ctx + ".im");
  if (im.rows() != re.rows() || im.cols() != re.cols()) detail::parse_fail(ctx + ": re and im shapes differ");
  CMat out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  if (!out.allFinite()) detail::parse_fail(ctx + ": non-finite entry");
  return out;
}

inline CVec vector_from_json(const json& j, const std::string& ctx) {
  const json& re = detail::field(j, "re", ctx);
  if (!re.is_array() || re.empty()) detail::parse_fail(ctx + ".re: expected a non-empty array");
  CVec out(static_cast<Index>(re.size()));
  const json* im = j.contains("im") ? &j.at("im") : nullptr;
  if (im && (!im->is_array() || im->size() != re.size())) detail::parse_fail(ctx + ": re and im lengths differ");
  for (std::size_t i = 0; i < re.size(); ++i) {
    out(static_cast<Index>(i)) = cplx(detail::number(re[i], ctx), im ? detail::number((*im)[i], ctx) : 0.0);
  }
  return out;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(ErrorKind::parse, path + ": " + e.what());
  }
}

inline Index dim_field(const json& j, const std::string& ctx) {
  const json& d = detail::field(j, "d", ctx);
  if (!d.is_number_integer() || d.get<long long>() < 1) detail::parse_fail(ctx + ": \"d\" must be a positive integer");
  return d.get<Index>();
}

// -- channels ------------------------------------------------------------------

inline Channel named_channel(const std::string& name, const json& params, Index d) {
  Index pd = d;
  if (params.is_object() && params.contains("d")) {
    if (!params.at("d").is_number_integer() || params.at("d").get<long long>() < 1) {
      detail::parse_fail("params.d must be a positive integer");
    }
    pd = params.at("d").get<Index>();
    if (pd != d) detail::parse_fail("params.d disagrees with d");
  }
  if (name == "depolarizing") return depolarizing(pd);
  if (name == "map_to_diagonal") return map_to_diagonal(pd);
  if (name == "identity") return identity_channel(pd);
  if (name == "werner_holevo3") {
    if (pd != 3) detail::parse_fail("werner_holevo3 is defined for d = 3 only");
    return werner_holevo3();
  }
  detail::parse_fail("unknown named channel \"" + name + "\"");
}

/// {"d", "kind": "kraus" | "choi" | "named", ...}.
inline Channel channel_from_json(const json& j, const Tolerances& tol = {}) {
  if (!j.is_object()) detail::parse_fail("channel document must be an object");
  const Index d = dim_field(j, "channel");
  const json& kind = detail::field(j, "kind", "channel");
  if (!kind.is_string()) detail::parse_fail("channel: \"kind\" must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "kraus") {
    const json& list = detail::field(j, "kraus", "channel");
    if (!list.is_array() || list.empty()) detail::parse_fail("channel.kraus must be a non-empty array");
    std::vector<CMat> ops;
    for (std::size_t i = 0; i < list.size(); ++i) {
      CMat op = matrix_from_json(list[i], "kraus[" + std::to_string(i) + "]");
      if (op.rows() != d || op.cols() != d) fail(ErrorKind::dimension, "kraus[" + std::to_string(i) + "] is not d x d");
      ops.push_back(std::move(op));
    }
    return Channel::from_kraus(KrausSet(d, std::move(ops)), tol);
  }
  if (k == "choi") {
    CMat m = matrix_from_json(detail::field(j, "choi", "channel"), "choi");
    if (m.rows() != d * d || m.cols() != d * d) fail(ErrorKind::dimension, "choi matrix is not d^2 x d^2");
    if (!is_hermitian(m, 1e-9 * std::max(1.0, m.norm()))) fail(ErrorKind::not_completely_positive, "choi matrix is not Hermitian");
    return Channel::from_choi({d, m}, tol);
  }
  if (k == "named") {
    const json& name = detail::field(j, "name", "channel");
    if (!name.is_string()) detail::parse_fail("channel: \"name\" must be a string");
    return named_channel(name.get<std::string>(), j.contains("params") ? j.at("params") : json::object(), d);
  }
  detail::parse_fail("channel: unknown kind \"" + k + "\"");
}

inline json channel_to_json(const Channel& phi) {
  json ops = json::array();
  for (const auto& k : phi.kraus().ops()) ops.push_back(matrix_to_json(k));
  return json{{"d", phi.dim()}, {"kind", "kraus"}, {"kraus", std::move(ops)}};
}

// -- algebras ------------------------------------------------------------------

inline json blocks_json(const std::vector<Block>& blocks) {
  json out = json::array();
  for (const auto& b : blocks) out.push_back(json::array({b.m, b.n}));
  return out;
}

inline json algebra_to_json(const AlgebraStructure& a) {
  return json{{"convention", "storage"},
              {"blocks", blocks_json(a.blocks())},
              {"reduction_blocks", blocks_json(a.blocks(Convention::reduction))},
              {"d", a.dim()},
              {"D", a.D()},
              {"r", a.r()},
              {"r_hat", a.r_hat()},
              {"algebra_dim", a.algebra_dim()}};
}

/// {"d", "blocks": [[m, n], ...], "unitary"?: matrix}. Without a unitary the
/// algebra is in standard position.
inline AlgebraStructure algebra_from_json(const json& j) {
  const Index d = dim_field(j, "algebra");
  const json& bl = detail::field(j, "blocks", "algebra");
  if (!bl.is_array() || bl.empty()) detail::parse_fail("algebra.blocks must be a non-empty array");
  std::vector<Block> blocks;
  Index total = 0;
  for (const auto& b : bl) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer()) {
      detail::parse_fail("algebra.blocks entries must be [m, n] integer pairs");
    }
    blocks.push_back({b[0].get<Index>(), b[1].get<Index>()});
    if (blocks.back().m < 1 || blocks.back().n < 1) detail::parse_fail("algebra block sizes must be >= 1");
    total += blocks.back().size();
  }
  if (total != d) fail(ErrorKind::dimension, "algebra blocks do not add up to d");
  if (!j.contains("unitary")) return AlgebraStructure::from_blocks(std::move(blocks));
  CMat w = matrix_from_json(j.at("unitary"), "algebra.unitary");
  if (w.rows() != d || w.cols() != d) fail(ErrorKind::dimension, "algebra.unitary is not d x d");
  if (!is_unitary(w, 1e-9)) fail(ErrorKind::domain, "algebra.unitary is not unitary");
  return AlgebraStructure::from_standard_form(std::move(blocks), w);
}

// -- correlation matrices ------------------------------------------------------

/// {"d", "kind": "correlation", "matrix": matrix}.
inline CorrelationMatrix correlation_from_json(const json& j, const Tolerances& tol = {}) {
  const Index d = dim_field(j, "correlation");
  if (j.contains("kind") && j.at("kind") != "correlation") detail::parse_fail("correlation: kind must be \"correlation\"");
  CMat m = matrix_from_json(detail::field(j, "matrix", "correlation"), "matrix");
  if (m.rows() != d || m.cols() != d) fail(ErrorKind::dimension, "correlation matrix is not d x d");
  return CorrelationMatrix(m, tol);
}

inline json correlation_to_json(const CMat& c) {
  return json{{"d", c.rows()}, {"kind", "correlation"}, {"matrix", matrix_to_json(c)}};
}

// -- decompositions ------------------------------------------------------------

inline json decomposition_to_json(const MixedUnitaryDecomposition& dec) {
  json us = json::array();
  for (const auto& u : dec.unitaries) us.push_back(matrix_to_json(u));
  return json{{"atoms", dec.size()},
              {"weights", dec.weights},
              {"weight_sum", dec.weight_sum()},
              {"unitaries", std::move(us)},
              {"residual", residual_json(dec.residual)}};
}

/// Rebuilds a decomposition from its report form; the target must be
/// supplied since reports store it once, as the input channel.
inline MixedUnitaryDecomposition decomposition_from_json(const json& j, const ChoiMatrix& target) {
  const json& w = detail::field(j, "weights", "decomposition");
  const json& us = detail::field(j, "unitaries", "decomposition");
  if (!w.is_array() || !us.is_array() || w.size() != us.size()) {
    detail::parse_fail("decomposition: weights and unitaries must be arrays of equal length");
  }
  std::vector<double> weights;
  std::vector<CMat> unitaries;
  for (std::size_t i = 0; i < w.size(); ++i) {
    weights.push_back(detail::number(w[i], "decomposition.weights"));
    unitaries.push_back(matrix_from_json(us[i], "decomposition.unitaries[" + std::to_string(i) + "]"));
  }
  return make_decomposition(std::move(weights), std::move(unitaries), target);
}

inline json atom_set_to_json(const RankOneAtomSet& s) {
  json atoms = json::array();
  for (const auto& z : s.atoms) atoms.push_back(vector_to_json(z));
  return json{{"atoms", s.atoms.size()},
              {"weights", s.weights},
              {"weight_sum", s.weight_sum()},
              {"vectors", std::move(atoms)},
              {"residual", residual_json(s.residual)}};
}

}  // namespace muwork::cli
