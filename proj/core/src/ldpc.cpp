/*
 * Copyright 2026 The recursic Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "recursic/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "recursic/errors.hpp"
#include "recursic/rng.hpp"

namespace recursic {

ParityCheckMatrix::ParityCheckMatrix(std::size_t n, std::vector<std::vector<std::size_t>> check_vars)
    : n_(n), check_vars_(std::move(check_vars)), var_checks_(n) {
  if (n_ == 0 || check_vars_.empty()) throw ParseError("parity-check matrix must be non-empty");
  for (std::size_t c = 0; c < check_vars_.size(); ++c) {
    auto& row = check_vars_[c];
    if (row.empty()) throw ParseError("check " + std::to_string(c) + " has no variables");
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw ParseError("check " + std::to_string(c) + " lists a variable twice");
    for (std::size_t v : row) {
      if (v >= n_) throw ParseError("check " + std::to_string(c) + " references variable out of range");
      var_checks_[v].push_back(c);
    }
    edges_ += row.size();
  }
  for (std::size_t v = 0; v < n_; ++v)
    if (var_checks_[v].empty()) throw ParseError("variable " + std::to_string(v) + " is in no check");
}

ParityCheckMatrix ParityCheckMatrix::from_dense(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ParseError("empty dense matrix");
  const std::size_t n = rows.front().size();
  std::vector<std::vector<std::size_t>> cv(rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (rows[c].size() != n) throw ParseError("ragged dense matrix");
    for (std::size_t v = 0; v < n; ++v) {
      if (rows[c][v] != 0 && rows[c][v] != 1) throw ParseError("dense matrix must be binary");
      if (rows[c][v]) cv[c].push_back(v);
    }
  }
  return ParityCheckMatrix(n, std::move(cv));
}

bool ParityCheckMatrix::satisfied(std::span<const Bit> word) const {
  if (word.size() != n_) throw DimensionError("syndrome: word length mismatch");
  for (const auto& row : check_vars_) {
    unsigned parity = 0;
    for (std::size_t v : row) parity ^= word[v] & 1u;
    if (parity) return false;
  }
  return true;
}

std::vector<std::vector<int>> ParityCheckMatrix::to_dense() const {
  std::vector<std::vector<int>> out(m(), std::vector<int>(n_, 0));
  for (std::size_t c = 0; c < m(); ++c)
    for (std::size_t v : check_vars_[c]) out[c][v] = 1;
  return out;
}

namespace {

// Reads the next non-blank line as a list of integers.
class AlistReader {
 public:
  explicit AlistReader(std::string_view text) : in_(std::string(text)) {}

  std::vector<long> line(const char* what) {
    std::string s;
    while (std::getline(in_, s)) {
      if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(s);
      std::vector<long> vals;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          vals.push_back(std::stol(tok, &used));
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ParseError(std::string("alist: bad integer '") + tok + "' in " + what);
        }
      }
      return vals;
    }
    throw ParseError(std::string("alist: truncated before ") + what);
  }

  bool at_end() {
    std::string s;
    while (std::getline(in_, s))
      if (s.find_first_not_of(" \t\r") != std::string::npos) return false;
    return true;
  }

 private:
  std::istringstream in_;
};

std::vector<std::size_t> read_list(AlistReader& r, const char* what, long degree, long max_degree,
                                   long limit) {
  const auto vals = r.line(what);
  std::vector<std::size_t> out;
  for (long v : vals) {
    if (v == 0) continue;
    if (v < 0 || v > limit) throw ParseError(std::string("alist: index out of range in ") + what);
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  if (static_cast<long>(vals.size()) > max_degree && static_cast<long>(vals.size()) != degree)
    throw ParseError(std::string("alist: too many entries in ") + what);
  if (static_cast<long>(out.size()) != degree) throw ParseError(std::string("alist: degree mismatch in ") + what);
  return out;
}

}  // namespace

ParityCheckMatrix parse_alist(std::string_view text) {
  AlistReader r(text);
  const auto dims = r.line("header");
  if (dims.size() != 2 || dims[0] <= 0 || dims[1] <= 0) throw ParseError("alist: malformed header 'n m'");
  const long n = dims[0];
  const long m = dims[1];
  const auto maxdeg = r.line("max degrees");
  if (maxdeg.size() != 2 || maxdeg[0] <= 0 || maxdeg[1] <= 0)
    throw ParseError("alist: malformed max degree line");
  const auto col_deg = r.line("column degrees");
  const auto row_deg = r.line("row degrees");
  if (static_cast<long>(col_deg.size()) != n) throw ParseError("alist: column degree count != n");
  if (static_cast<long>(row_deg.size()) != m) throw ParseError("alist: row degree count != m");
  for (long d : col_deg)
    if (d <= 0 || d > maxdeg[0]) throw ParseError("alist: column degree out of range");
  for (long d : row_deg)
    if (d <= 0 || d > maxdeg[1]) throw ParseError("alist: row degree out of range");

  std::vector<std::vector<std::size_t>> cols(static_cast<std::size_t>(n));
  for (long v = 0; v < n; ++v) cols[v] = read_list(r, "column list", col_deg[v], maxdeg[0], m);
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(m));
  for (long c = 0; c < m; ++c) rows[c] = read_list(r, "row list", row_deg[c], maxdeg[1], n);
  if (!r.at_end()) throw ParseError("alist: trailing content");

  ParityCheckMatrix hm(static_cast<std::size_t>(n), std::move(rows));
  for (std::size_t v = 0; v < cols.size(); ++v) {
    std::sort(cols[v].begin(), cols[v].end());
    if (cols[v] != hm.var_checks()[v]) throw ParseError("alist: column lists disagree with row lists");
  }
  return hm;
}

ParityCheckMatrix load_alist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open alist file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_alist(ss.str());
}

std::string to_alist(const ParityCheckMatrix& hm) {
  std::size_t max_col = 0;
  std::size_t max_row = 0;
  for (const auto& c : hm.var_checks()) max_col = std::max(max_col, c.size());
  for (const auto& r : hm.check_vars()) max_row = std::max(max_row, r.size());
  std::ostringstream out;
  out << hm.n() << ' ' << hm.m() << '\n' << max_col << ' ' << max_row << '\n';
  auto join_sizes = [&out](const auto& lists) {
    for (std::size_t i = 0; i < lists.size(); ++i) out << (i ? " " : "") << lists[i].size();
    out << '\n';
  };
  join_sizes(hm.var_checks());
  join_sizes(hm.check_vars());
  auto write_lists = [&out](const auto& lists, std::size_t width) {
    for (const auto& l : lists) {
      for (std::size_t i = 0; i < width; ++i) out << (i ? " " : "") << (i < l.size() ? l[i] + 1 : 0);
      out << '\n';
    }
  };
  write_lists(hm.var_checks(), max_col);
  write_lists(hm.check_vars(), max_row);
  return out.str();
}

ParityCheckMatrix make_regular_code(std::size_t n, std::size_t dv, std::size_t dc, std::uint64_t seed) {
  if (n == 0 || dv == 0 || dc == 0 || (n * dv) % dc != 0)
    throw ConfigError("regular code: n * dv must be a positive multiple of dc");
  const std::size_t m = n * dv / dc;
  Rng rng(seed);
  std::vector<std::size_t> sockets(n * dv);
  for (std::size_t i = 0; i < sockets.size(); ++i) sockets[i] = i / dc;  // check of socket i

  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (std::size_t i = sockets.size(); i > 1; --i) std::swap(sockets[i - 1], sockets[rng.below(i)]);
    // Variable v owns sockets [v*dv, (v+1)*dv).
    bool clean = true;
    for (int repair = 0; repair < 1000; ++repair) {
      clean = true;
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t a = 0; a < dv; ++a)
          for (std::size_t b = a + 1; b < dv; ++b)
            if (sockets[v * dv + a] == sockets[v * dv + b]) {
              clean = false;
              std::swap(sockets[v * dv + b], sockets[rng.below(sockets.size())]);
            }
      }
      if (clean) break;
    }
    if (!clean) continue;
    std::vector<std::vector<std::size_t>> rows(m);
    for (std::size_t i = 0; i < sockets.size(); ++i) rows[sockets[i]].push_back(i / dv);
    return ParityCheckMatrix(n, std::move(rows));
  }
  throw Error("regular code: could not build a matrix without repeated edges");
}

LdpcEncoder::LdpcEncoder(const ParityCheckMatrix& hm) : n_(hm.n()) {
  const std::size_t m = hm.m();
  const std::size_t words = (n_ + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(m, std::vector<std::uint64_t>(words, 0));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t v : hm.check_vars()[c]) rows[c][v / 64] |= std::uint64_t{1} << (v % 64);
  auto test = [](const std::vector<std::uint64_t>& r, std::size_t col) {
    return (r[col / 64] >> (col % 64)) & 1u;
  };

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  // Pivot from the right so parity bits land at the end where possible.
  for (std::size_t col = n_; col-- > 0 && rank < m;) {
    std::size_t sel = rank;
    while (sel < m && !test(rows[sel], col)) ++sel;
    if (sel == m) continue;
    std::swap(rows[sel], rows[rank]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r != rank && test(rows[r], col))
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < m) {
    throw RankDeficientError("LDPC encoder: H has rank " + std::to_string(rank) + " < " + std::to_string(m) +
                             " checks");
  }
  std::vector<char> is_pivot(n_, 0);
  for (std::size_t c : pivot_col) is_pivot[c] = 1;
  std::vector<std::size_t> info_index(n_, 0);
  for (std::size_t v = 0; v < n_; ++v)
    if (!is_pivot[v]) {
      info_index[v] = info_positions_.size();
      info_positions_.push_back(v);
    }
  parity_positions_ = pivot_col;
  parity_taps_.resize(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t v : info_positions_)
      if (test(rows[r], v)) parity_taps_[r].push_back(info_index[v]);
}

std::vector<Bit> LdpcEncoder::encode(std::span<const Bit> info) const {
  if (info.size() != k())
    throw DimensionError("LDPC encoder: expected " + std::to_string(k()) + " info bits, got " + std::to_string(info.size()));
  std::vector<Bit> cw(n_, 0);
  for (std::size_t i = 0; i < info.size(); ++i) cw[info_positions_[i]] = info[i] & 1u;
  for (std::size_t r = 0; r < parity_positions_.size(); ++r) {
    unsigned p = 0;
    for (std::size_t t : parity_taps_[r]) p ^= info[t] & 1u;
    cw[parity_positions_[r]] = static_cast<Bit>(p);
  }
  return cw;
}

std::vector<Bit> LdpcEncoder::extract_info(std::span<const Bit> codeword) const {
  if (codeword.size() != n_) throw DimensionError("LDPC: codeword length mismatch");
  std::vector<Bit> info(k());
  for (std::size_t i = 0; i < info.size(); ++i) info[i] = codeword[info_positions_[i]];
  return info;
}

std::vector<Bit> encode(const ParityCheckMatrix& hm, std::span<const Bit> info) {
  return LdpcEncoder(hm).encode(info);
}

namespace {
constexpr double kMaxMessage = 1e12;
}  // namespace

std::vector<double> check_node_update(std::span<const double> incoming, double norm_factor) {
  std::vector<double> out(incoming.size());
  double min1 = std::numeric_limits<double>::infinity();
  double min2 = min1;
  std::size_t argmin = 0;
  bool negative = false;
  for (std::size_t e = 0; e < incoming.size(); ++e) {
    const double mag = std::abs(incoming[e]);
    negative ^= incoming[e] < 0.0;
    if (mag < min1) {
      min2 = min1;
      min1 = mag;
      argmin = e;
    } else if (mag < min2) {
      min2 = mag;
    }
  }
  for (std::size_t e = 0; e < incoming.size(); ++e) {
    const bool neg = negative ^ (incoming[e] < 0.0);
    const double mag = norm_factor * std::min(e == argmin ? min2 : min1, kMaxMessage);
    out[e] = neg ? -mag : mag;
  }
  return out;
}

DecodeResult decode_min_sum(const ParityCheckMatrix& hm, std::span<const double> llrs,
                            std::size_t max_iters, double norm_factor) {
  const std::size_t n = hm.n();
  if (llrs.size() != n) throw DimensionError("min-sum: LLR count does not match code length");
  if (!(norm_factor > 0.0 && norm_factor <= 1.0)) throw ConfigError("min-sum: norm_factor must lie in (0, 1]");
  for (double v : llrs)
    if (!std::isfinite(v)) throw DimensionError("min-sum: non-finite LLR");

  // Edge e of check c lives at offset[c] + i; var_edges lists each variable's edges.
  const auto& cv = hm.check_vars();
  std::vector<std::size_t> offset(hm.m() + 1, 0);
  for (std::size_t c = 0; c < hm.m(); ++c) offset[c + 1] = offset[c] + cv[c].size();
  std::vector<std::size_t> edge_var(offset.back());
  std::vector<std::vector<std::size_t>> var_edges(n);
  for (std::size_t c = 0; c < hm.m(); ++c)
    for (std::size_t i = 0; i < cv[c].size(); ++i) {
      edge_var[offset[c] + i] = cv[c][i];
      var_edges[cv[c][i]].push_back(offset[c] + i);
    }

  std::vector<double> q(edge_var.size());  // variable -> check
  std::vector<double> r(edge_var.size());  // check -> variable
  for (std::size_t e = 0; e < q.size(); ++e) q[e] = llrs[edge_var[e]];

  DecodeResult out;
  out.bits.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.bits[v] = llrs[v] < 0.0 ? 1 : 0;
  if (hm.satisfied(out.bits)) {
    out.converged = true;
    return out;
  }

  std::vector<double> total(n);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    for (std::size_t c = 0; c < hm.m(); ++c) {
      double min1 = std::numeric_limits<double>::infinity();
      double min2 = min1;
      std::size_t argmin = offset[c];
      bool negative = false;
      for (std::size_t e = offset[c]; e < offset[c + 1]; ++e) {
        const double mag = std::abs(q[e]);
        negative ^= q[e] < 0.0;
        if (mag < min1) {
          min2 = min1;
          min1 = mag;
          argmin = e;
        } else if (mag < min2) {
          min2 = mag;
        }
      }
      for (std::size_t e = offset[c]; e < offset[c + 1]; ++e) {
        // A degree-1 check pins its variable to 0; keep that message finite.
        const double mag = norm_factor * std::min(e == argmin ? min2 : min1, kMaxMessage);
        r[e] = (negative ^ (q[e] < 0.0)) ? -mag : mag;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      double t = llrs[v];
      for (std::size_t e : var_edges[v]) t += r[e];
      total[v] = t;
      for (std::size_t e : var_edges[v]) q[e] = t - r[e];
      out.bits[v] = t < 0.0 ? 1 : 0;
    }
    out.iterations = it;
    if (hm.satisfied(out.bits)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace recursic
