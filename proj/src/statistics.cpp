#include "nonml/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>

#include "nonml/error.hpp"

namespace nonml {
namespace {

using I64 = std::int64_t;

double choose(I64 n, int k) {
  if (n < k || n < 0) return 0.0;
  double out = 1.0;
  for (int t = 0; t < k; ++t) out = out * static_cast<double>(n - t) / static_cast<double>(t + 1);
  return std::round(out);
}

/// Geometric damping weights for decay lambda: rho = 1 - 1/lambda,
/// g(k) = lambda (1 - rho^k), f(d) = lambda^2 (rho^d - 1 + d / lambda).
class Alt {
 public:
  explicit Alt(double lambda) : lambda_(lambda), rho_(1.0 - 1.0 / lambda) {
    pow_.resize(kTable);
    double p = 1.0;
    for (auto& v : pow_) {
      v = p;
      p *= rho_;
    }
  }
  double pow(I64 k) const {
    if (k >= 0 && k < kTable) return pow_[static_cast<std::size_t>(k)];
    return std::pow(rho_, static_cast<double>(k));
  }
  double g(I64 k) const { return lambda_ * (1.0 - pow(k)); }
  double f(I64 d) const { return lambda_ * lambda_ * (pow(d) - 1.0 + static_cast<double>(d) / lambda_); }

 private:
  static constexpr I64 kTable = 2048;
  double lambda_;
  double rho_;
  std::vector<double> pow_;
};

using ValueFn = double (*)(const NetworkState&, const Alt&);
using DeltaFn = double (*)(const NetworkState&, std::size_t, std::size_t, const Alt&);

struct Def {
  StatisticInfo info;
  ValueFn value;
  DeltaFn delta_w;  // nullptr: independent of W
  DeltaFn delta_y;  // nullptr: independent of Y
};

// ---- value helpers ---------------------------------------------------------

template <class F>
double sum_nodes(const NetworkState& s, F fn) {
  double out = 0;
  for (std::size_t i = 0; i < s.n(); ++i) out += fn(i);
  return out;
}

template <class F>
double sum_pairs_p(const NetworkState& s, F fn) {
  double out = 0;
  for (std::size_t r = 0; r < s.e(); ++r) out += fn(r);
  return out;
}

template <class F>
double sum_node_pairs(const NetworkState& s, F fn) {
  double out = 0;
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::size_t j = i + 1; j < s.n(); ++j) out += fn(i, j);
  return out;
}

template <class F>
double sum_y_edges(const NetworkState& s, F fn) {
  double out = 0;
  for (std::size_t i = 0; i < s.n(); ++i)
    for (std::uint32_t j : s.y_neighbours(i))
      if (j > i) out += fn(i, j);
  return out;
}

template <class F>
double sum_p_pairs(const NetworkState& s, F fn) {
  double out = 0;
  for (std::size_t r = 0; r < s.e(); ++r)
    for (std::size_t t = r + 1; t < s.e(); ++t) out += fn(r, t);
  return out;
}

double star_value(const NetworkState& s, int k) {
  return sum_nodes(s, [&](std::size_t i) { return choose(s.y_degree(i), k); });
}
double star_delta(const NetworkState& s, std::size_t i, std::size_t j, int k) {
  return choose(s.y_degree(i), k - 1) + choose(s.y_degree(j), k - 1);
}
double xstar_a_value(const NetworkState& s, int k) {
  return sum_nodes(s, [&](std::size_t i) { return choose(s.x_degree(i), k); });
}
double xstar_b_value(const NetworkState& s, int k) {
  return sum_pairs_p(s, [&](std::size_t r) { return choose(s.b_degree(r), k); });
}

// Pendant counts for edge-cycle statistics.
double ec_term(I64 m, I64 xi, I64 xj) { return choose(m, 2) * static_cast<double>(xi + xj - 4); }
double aec_term(I64 m, I64 xi, I64 xj, const Alt& a) {
  const double c = choose(m, 2);
  return c == 0.0 ? 0.0 : c * (a.g(xi - 2) + a.g(xj - 2));
}

double aeta_term(I64 tri, I64 deg, const Alt& a) { return tri == 0 ? 0.0 : static_cast<double>(tri) * a.g(deg - 2); }

double f_q_row(const NetworkState& s, std::size_t i, const Alt& a) {
  double out = 0;
  for (std::uint32_t r : s.w_row(i)) out += a.f(s.q_degree(r));
  return out;
}

// ---- registry --------------------------------------------------------------

const std::vector<Def>& definitions() {
  static const std::vector<Def> defs = {
      // One-mode A (Y).
      {{"EdgeA"},
       [](const NetworkState& s, const Alt&) { return sum_nodes(s, [&](std::size_t i) { return double(s.y_degree(i)); }) / 2; },
       nullptr,
       [](const NetworkState&, std::size_t, std::size_t, const Alt&) { return 1.0; }},
      {{"Star2A"}, [](const NetworkState& s, const Alt&) { return star_value(s, 2); }, nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return star_delta(s, i, j, 2); }},
      {{"Star3A"}, [](const NetworkState& s, const Alt&) { return star_value(s, 3); }, nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return star_delta(s, i, j, 3); }},
      {{"Star4A"}, [](const NetworkState& s, const Alt&) { return star_value(s, 4); }, nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return star_delta(s, i, j, 4); }},
      {{"Star5A"}, [](const NetworkState& s, const Alt&) { return star_value(s, 5); }, nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return star_delta(s, i, j, 5); }},
      {{"TriangleA"},
       [](const NetworkState& s, const Alt&) { return sum_nodes(s, [&](std::size_t i) { return double(s.y_triangles(i)); }) / 3; },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return double(s.shared_partners(i, j)); }},
      {{"Cycle4A"},
       [](const NetworkState& s, const Alt&) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) { return choose(s.shared_partners(i, j), 2); }) / 2;
       },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         double out = 0;
         for (std::uint32_t k : s.y_neighbours(i)) out += double(s.shared_partners(k, j));
         return out;
       }},
      {{"IsolatesA"},
       [](const NetworkState& s, const Alt&) { return sum_nodes(s, [&](std::size_t i) { return s.y_degree(i) == 0 ? 1.0 : 0.0; }); },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         return -double(s.y_degree(i) == 0) - double(s.y_degree(j) == 0);
       }},
      {{"IsolateEdgesA"},
       [](const NetworkState& s, const Alt&) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) {
           return s.y_degree(i) == 1 && s.y_degree(j) == 1 ? 1.0 : 0.0;
         });
       },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         double out = (s.y_degree(i) == 0 && s.y_degree(j) == 0) ? 1.0 : 0.0;
         for (std::size_t v : {i, j}) {
           if (s.y_degree(v) == 1 && s.y_degree(s.y_neighbours(v).front()) == 1) out -= 1.0;
         }
         return out;
       }},
      {{"ASA", true},
       [](const NetworkState& s, const Alt& a) { return sum_nodes(s, [&](std::size_t i) { return a.f(s.y_degree(i)); }); },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) {
         return a.g(s.y_degree(i)) + a.g(s.y_degree(j));
       }},
      {{"ATA", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) { return a.g(s.shared_partners(i, j)); });
       },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) {
         double out = a.g(s.shared_partners(i, j));
         for (std::uint32_t k : s.y_neighbours(i))
           if (s.y(j, k)) out += a.pow(s.shared_partners(i, k)) + a.pow(s.shared_partners(j, k));
         return out;
       }},
      {{"A2PA", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) { return a.g(s.shared_partners(i, j)); });
       },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) {
         double out = 0;
         for (std::uint32_t k : s.y_neighbours(j)) out += a.pow(s.shared_partners(i, k));
         for (std::uint32_t k : s.y_neighbours(i)) out += a.pow(s.shared_partners(j, k));
         return out;
       }},
      {{"AETA", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_nodes(s, [&](std::size_t i) { return aeta_term(s.y_triangles(i), s.y_degree(i), a); });
       },
       nullptr,
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) {
         const I64 sp = s.shared_partners(i, j);
         double out = 0;
         for (std::size_t v : {i, j}) {
           out += aeta_term(s.y_triangles(v) + sp, s.y_degree(v) + 1, a) - aeta_term(s.y_triangles(v), s.y_degree(v), a);
         }
         for (std::uint32_t k : s.y_neighbours(i))
           if (s.y(j, k)) out += a.g(s.y_degree(k) - 2);
         return out;
       }},

      // Cross-level X (W).
      {{"XEdge"},
       [](const NetworkState& s, const Alt&) { return sum_nodes(s, [&](std::size_t i) { return double(s.x_degree(i)); }); },
       [](const NetworkState&, std::size_t, std::size_t, const Alt&) { return 1.0; }, nullptr},
      {{"XStar2A"}, [](const NetworkState& s, const Alt&) { return xstar_a_value(s, 2); },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt&) { return choose(s.x_degree(i), 1); }, nullptr},
      {{"XStar2B"}, [](const NetworkState& s, const Alt&) { return xstar_b_value(s, 2); },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return choose(s.b_degree(r), 1); }, nullptr},
      {{"XStar3A"}, [](const NetworkState& s, const Alt&) { return xstar_a_value(s, 3); },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt&) { return choose(s.x_degree(i), 2); }, nullptr},
      {{"XStar3B"}, [](const NetworkState& s, const Alt&) { return xstar_b_value(s, 3); },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return choose(s.b_degree(r), 2); }, nullptr},
      {{"X3Path"},
       [](const NetworkState& s, const Alt&) {
         double out = 0;
         for (std::size_t j = 0; j < s.n(); ++j)
           for (std::uint32_t r : s.w_row(j)) out += double((s.b_degree(r) - 1) * (s.x_degree(j) - 1));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = double(s.b_degree(r) * s.x_degree(i));
         for (std::uint32_t t : s.w_row(i)) out += double(s.b_degree(t) - 1);
         for (std::uint32_t j : s.w_col(r)) out += double(s.x_degree(j) - 1);
         return out;
       },
       nullptr},
      {{"X4Cycle"},
       [](const NetworkState& s, const Alt&) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) { return choose(s.co_affiliations(i, j), 2); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t j : s.w_col(r)) out += double(s.co_affiliations(i, j));
         return out;
       },
       nullptr},
      {{"XECA"},
       [](const NetworkState& s, const Alt&) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) {
           return ec_term(s.co_affiliations(i, j), s.x_degree(i), s.x_degree(j));
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         const I64 xi = s.x_degree(i);
         for (std::size_t j = 0; j < s.n(); ++j) {
           if (j == i) continue;
           const I64 m = s.co_affiliations(i, j);
           out += ec_term(m + s.w(j, r), xi + 1, s.x_degree(j)) - ec_term(m, xi, s.x_degree(j));
         }
         return out;
       },
       nullptr},
      {{"XECB"},
       [](const NetworkState& s, const Alt&) {
         return sum_p_pairs(s, [&](std::size_t r, std::size_t t) {
           return choose(s.co_reporters(r, t), 2) * double(s.b_degree(r) + s.b_degree(t) - 4);
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         const I64 br = s.b_degree(r);
         for (std::size_t t = 0; t < s.e(); ++t) {
           if (t == r) continue;
           const I64 c = s.co_reporters(r, t);
           const I64 bt = s.b_degree(t);
           out += choose(c + s.w(i, t), 2) * double(br + 1 + bt - 4) - choose(c, 2) * double(br + bt - 4);
         }
         return out;
       },
       nullptr},
      {{"XAECA", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) {
           return aec_term(s.co_affiliations(i, j), s.x_degree(i), s.x_degree(j), a);
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         const I64 xi = s.x_degree(i);
         for (std::size_t j = 0; j < s.n(); ++j) {
           if (j == i) continue;
           const I64 m = s.co_affiliations(i, j);
           out += aec_term(m + s.w(j, r), xi + 1, s.x_degree(j), a) - aec_term(m, xi, s.x_degree(j), a);
         }
         return out;
       },
       nullptr},
      {{"XAECB", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_p_pairs(s, [&](std::size_t r, std::size_t t) {
           return aec_term(s.co_reporters(r, t), s.b_degree(r), s.b_degree(t), a);
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         const I64 br = s.b_degree(r);
         for (std::size_t t = 0; t < s.e(); ++t) {
           if (t == r) continue;
           const I64 c = s.co_reporters(r, t);
           out += aec_term(c + s.w(i, t), br + 1, s.b_degree(t), a) - aec_term(c, br, s.b_degree(t), a);
         }
         return out;
       },
       nullptr},
      {{"IsolatesXA"},
       [](const NetworkState& s, const Alt&) { return sum_nodes(s, [&](std::size_t i) { return s.x_degree(i) == 0 ? 1.0 : 0.0; }); },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt&) { return s.x_degree(i) == 0 ? -1.0 : 0.0; },
       nullptr},
      {{"IsolatesXB"},
       [](const NetworkState& s, const Alt&) { return sum_pairs_p(s, [&](std::size_t r) { return s.b_degree(r) == 0 ? 1.0 : 0.0; }); },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return s.b_degree(r) == 0 ? -1.0 : 0.0; },
       nullptr},
      {{"XASA", true},
       [](const NetworkState& s, const Alt& a) { return sum_nodes(s, [&](std::size_t i) { return a.f(s.x_degree(i)); }); },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt& a) { return a.g(s.x_degree(i)); }, nullptr},
      {{"XASB", true},
       [](const NetworkState& s, const Alt& a) { return sum_pairs_p(s, [&](std::size_t r) { return a.f(s.b_degree(r)); }); },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt& a) { return a.g(s.b_degree(r)); }, nullptr},
      {{"XACA", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_p_pairs(s, [&](std::size_t r, std::size_t t) { return a.g(s.co_reporters(r, t)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         for (std::uint32_t t : s.w_row(i)) out += a.pow(s.co_reporters(r, t));
         return out;
       },
       nullptr},
      {{"XACB", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_node_pairs(s, [&](std::size_t i, std::size_t j) { return a.g(s.co_affiliations(i, j)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         for (std::uint32_t j : s.w_col(r)) out += a.pow(s.co_affiliations(i, j));
         return out;
       },
       nullptr},

      // A-X interactions.
      {{"Star2AX"},
       [](const NetworkState& s, const Alt&) {
         return sum_nodes(s, [&](std::size_t i) { return double(s.y_degree(i) * s.x_degree(i)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt&) { return double(s.y_degree(i)); },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         return double(s.x_degree(i) + s.x_degree(j));
       }},
      {{"TriangleXAX"},
       [](const NetworkState& s, const Alt&) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) { return double(s.co_affiliations(i, j)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t j : s.y_neighbours(i)) out += s.w(j, r);
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return double(s.co_affiliations(i, j)); }},
      {{"L3XAX"},
       [](const NetworkState& s, const Alt&) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) {
           return double(s.x_degree(i) * s.x_degree(j) - s.co_affiliations(i, j));
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t j : s.y_neighbours(i)) out += double(s.x_degree(j) - s.w(j, r));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         return double(s.x_degree(i) * s.x_degree(j) - s.co_affiliations(i, j));
       }},
      {{"ATXAX", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) { return a.g(s.co_affiliations(i, j)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         for (std::uint32_t j : s.y_neighbours(i))
           if (s.w(j, r)) out += a.pow(s.co_affiliations(i, j));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) { return a.g(s.co_affiliations(i, j)); }},
      {{"EXTA"},
       [](const NetworkState& s, const Alt&) {
         return sum_nodes(s, [&](std::size_t i) { return double(s.x_degree(i) * s.y_triangles(i)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t, const Alt&) { return double(s.y_triangles(i)); },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         double out = double(s.shared_partners(i, j) * (s.x_degree(i) + s.x_degree(j)));
         for (std::uint32_t k : s.y_neighbours(i))
           if (s.y(j, k)) out += double(s.x_degree(k));
         return out;
       }},

      // B-X interactions.
      {{"Star2BX"},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return double(s.b_degree(r) * s.q_degree(r)); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return double(s.q_degree(r)); }, nullptr},
      {{"TriangleXBX"},
       [](const NetworkState& s, const Alt&) {
         double out = 0;
         for (std::size_t i = 0; i < s.n(); ++i)
           for (std::uint32_t r : s.w_row(i)) out += double(s.w_q(i, r));
         return out / 2;
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) { return double(s.w_q(i, r)); }, nullptr},
      {{"L3XBX"},
       [](const NetworkState& s, const Alt&) {
         double out = 0;
         for (std::size_t r = 0; r < s.e(); ++r)
           for (std::uint32_t t : s.top().q_adj[r])
             if (t > r) out += double(s.b_degree(r) * s.b_degree(t) - s.co_reporters(r, t));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t t : s.top().q_adj[r]) out += double(s.b_degree(t) - s.w(i, t));
         return out;
       },
       nullptr},
      {{"ATXBX", true},
       [](const NetworkState& s, const Alt& a) {
         double out = 0;
         for (std::size_t r = 0; r < s.e(); ++r)
           for (std::uint32_t t : s.top().q_adj[r])
             if (t > r) out += a.g(s.co_reporters(r, t));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         for (std::uint32_t t : s.w_row(i))
           if (s.top().q(r, t)) out += a.pow(s.co_reporters(r, t));
         return out;
       },
       nullptr},
      {{"EXTB"},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return double(s.b_degree(r) * s.top().q_triangles[r]); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return double(s.top().q_triangles[r]); },
       nullptr},

      // A-X-B interactions.
      {{"C4AXB"},
       [](const NetworkState& s, const Alt&) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) { return double(s.h(i, j)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t j : s.y_neighbours(i)) out += double(s.w_q(j, r));
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) { return double(s.h(i, j)); }},
      {{"L3AXB"},
       [](const NetworkState& s, const Alt&) {
         return sum_nodes(s, [&](std::size_t i) { return double(s.y_degree(i) * s.w_q_degree(i)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         return double(s.y_degree(i) * s.q_degree(r));
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt&) {
         return double(s.w_q_degree(i) + s.w_q_degree(j));
       }},
      {{"ASAXASB", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_nodes(s, [&](std::size_t i) { return a.f(s.y_degree(i)) * f_q_row(s, i, a); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         return a.f(s.y_degree(i)) * a.f(s.q_degree(r));
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) {
         return a.g(s.y_degree(i)) * f_q_row(s, i, a) + a.g(s.y_degree(j)) * f_q_row(s, j, a);
       }},
      {{"AC4AXB", true},
       [](const NetworkState& s, const Alt& a) {
         return sum_y_edges(s, [&](std::size_t i, std::size_t j) { return a.g(s.h(i, j)); });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt& a) {
         double out = 0;
         for (std::uint32_t j : s.y_neighbours(i)) {
           const I64 h = s.h(i, j);
           out += a.g(h + s.w_q(j, r)) - a.g(h);
         }
         return out;
       },
       [](const NetworkState& s, std::size_t i, std::size_t j, const Alt& a) { return a.g(s.h(i, j)); }},

      // Criterion (D) interactions.
      {{"Expert_XEdgeB"},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return double(s.b_degree(r) * s.top().d[r]); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) { return double(s.top().d[r]); }, nullptr},
      {{"Expert_Star2BX"},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return double(s.b_degree(r) * s.top().d[r] * s.q_degree(r)); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) {
         return double(s.top().d[r] * s.q_degree(r));
       },
       nullptr},
      {{"XTriEdgeB"},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return double(s.b_degree(r) * s.top().criterion_two_paths[r]); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) {
         return double(s.top().criterion_two_paths[r]);
       },
       nullptr},
      {{"XC4ChordB"},
       [](const NetworkState& s, const Alt&) {
         double out = 0;
         for (std::size_t i = 0; i < s.n(); ++i)
           for (std::uint32_t r : s.w_row(i))
             for (std::uint32_t t : s.top().chord_partners[r]) out += s.w(i, t);
         return out / 2;
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         double out = 0;
         for (std::uint32_t t : s.top().chord_partners[r]) out += s.w(i, t);
         return out;
       },
       nullptr},
      {{"Expert_XStar2B", false, true},
       [](const NetworkState& s, const Alt&) {
         return sum_pairs_p(s, [&](std::size_t r) { return s.top().d[r] * choose(s.b_degree(r), 2); });
       },
       [](const NetworkState& s, std::size_t, std::size_t r, const Alt&) {
         return double(s.top().d[r] * s.b_degree(r));
       },
       nullptr},
      {{"Expert_X4CycleB", false, true},
       [](const NetworkState& s, const Alt&) {
         return sum_p_pairs(s, [&](std::size_t r, std::size_t t) {
           return s.top().d[r] && s.top().d[t] ? choose(s.co_reporters(r, t), 2) : 0.0;
         });
       },
       [](const NetworkState& s, std::size_t i, std::size_t r, const Alt&) {
         if (!s.top().d[r]) return 0.0;
         double out = 0;
         for (std::uint32_t t : s.w_row(i))
           if (s.top().d[t]) out += double(s.co_reporters(r, t));
         return out;
       },
       nullptr},
  };
  return defs;
}

const Def* find_def(std::string_view name) {
  for (const Def& d : definitions())
    if (d.info.name == name) return &d;
  return nullptr;
}

std::size_t def_position(std::string_view name) { return static_cast<std::size_t>(find_def(name) - definitions().data()); }

}  // namespace

std::string to_string(Layer layer) {
  switch (layer) {
    case Layer::W: return "W";
    case Layer::Y: return "Y";
    case Layer::Q: return "Q";
    case Layer::D: return "D";
  }
  return "W";
}

Layer parse_layer(const std::string& text) {
  if (text == "W" || text == "w" || text == "X") return Layer::W;
  if (text == "Y" || text == "y" || text == "A") return Layer::Y;
  if (text == "Q" || text == "q" || text == "B") return Layer::Q;
  if (text == "D" || text == "d") return Layer::D;
  throw Error(ErrorKind::InvalidParameter, "unknown layer '" + text + "'");
}

std::span<const StatisticInfo> statistic_registry() {
  static const std::vector<StatisticInfo> infos = [] {
    std::vector<StatisticInfo> out;
    for (const Def& d : definitions()) out.push_back(d.info);
    return out;
  }();
  return infos;
}

std::string canonical_statistic_name(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), ' ', '_');
  if (key == "TriangleXAC") key = "TriangleXAX";
  if (find_def(key) == nullptr) {
    throw Error(ErrorKind::UnknownStatistic, "unknown statistic '" + std::string(name) + "'");
  }
  return key;
}

StatisticId make_statistic(std::string_view name, double lambda) {
  StatisticId id{canonical_statistic_name(name), lambda};
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::InvalidParameter, "lambda for " + id.name + " must be a finite value > 1");
  }
  return id;
}

std::vector<StatisticId> all_statistics() {
  std::vector<StatisticId> out;
  for (const auto& info : statistic_registry()) out.push_back({std::string(info.name), 2.0});
  return out;
}

StatisticSet::StatisticSet(std::span<const StatisticId> ids) {
  for (const auto& raw : ids) {
    StatisticId id = make_statistic(raw.name, raw.lambda);
    defs_.push_back(def_position(id.name));
    lambdas_.push_back(id.lambda);
    ids_.push_back(std::move(id));
  }
}

namespace {

// Damping weights are cached per distinct lambda within one call.
struct AltCache {
  explicit AltCache(const std::vector<double>& lambdas) {
    for (double l : lambdas) {
      if (std::none_of(alts.begin(), alts.end(), [&](const auto& p) { return p.first == l; })) alts.emplace_back(l, Alt(l));
    }
  }
  const Alt& get(double l) const {
    for (const auto& p : alts)
      if (p.first == l) return p.second;
    return alts.front().second;
  }
  std::vector<std::pair<double, Alt>> alts;
};

const AltCache& alt_cache(const std::vector<double>& lambdas) {
  // Typical specs use one or two distinct lambdas; keep a small per-thread cache.
  thread_local std::vector<double> key;
  thread_local std::unique_ptr<AltCache> cache;
  if (!cache || key != lambdas) {
    key = lambdas;
    cache = std::make_unique<AltCache>(lambdas);
  }
  return *cache;
}

}  // namespace

std::vector<double> StatisticSet::values(const NetworkState& state) const {
  std::vector<double> out(defs_.size());
  if (defs_.empty()) return out;
  const auto& defs = definitions();
  const AltCache& alts = alt_cache(lambdas_);
  for (std::size_t k = 0; k < defs_.size(); ++k) out[k] = defs[defs_[k]].value(state, alts.get(lambdas_[k]));
  return out;
}

void StatisticSet::add_delta_w(const NetworkState& state, std::size_t i, std::size_t r, std::span<double> out) const {
  if (defs_.empty()) return;
  const auto& defs = definitions();
  const AltCache& alts = alt_cache(lambdas_);
  for (std::size_t k = 0; k < defs_.size(); ++k) {
    const Def& d = defs[defs_[k]];
    out[k] = d.delta_w ? d.delta_w(state, i, r, alts.get(lambdas_[k])) : 0.0;
  }
}

void StatisticSet::add_delta_y(const NetworkState& state, std::size_t i, std::size_t j, std::span<double> out) const {
  if (defs_.empty()) return;
  const auto& defs = definitions();
  const AltCache& alts = alt_cache(lambdas_);
  for (std::size_t k = 0; k < defs_.size(); ++k) {
    const Def& d = defs[defs_[k]];
    out[k] = d.delta_y ? d.delta_y(state, i, j, alts.get(lambdas_[k])) : 0.0;
  }
}

StatVector compute_statistics(const MultilevelNetwork& net, std::span<const StatisticId> ids) {
  StatisticSet set(ids);
  NetworkState state(net);
  const auto values = set.values(state);
  StatVector out;
  for (std::size_t k = 0; k < values.size(); ++k) out.push_back({set.ids()[k], values[k]});
  return out;
}

StatVector change_statistic(const MultilevelNetwork& net, const Toggle& toggle, std::span<const StatisticId> ids) {
  if (toggle.layer == Layer::Q || toggle.layer == Layer::D) {
    throw Error(ErrorKind::FixedLayer, "layer " + to_string(toggle.layer) + " is fixed and cannot be toggled");
  }
  StatisticSet set(ids);
  NetworkState state(net);
  std::vector<double> delta(set.size());
  if (toggle.layer == Layer::W) {
    if (toggle.i >= state.n() || toggle.j >= state.e()) throw Error(ErrorKind::Dimension, "W toggle out of range");
    if (state.w(toggle.i, toggle.j)) state.toggle_w(toggle.i, toggle.j);
    set.add_delta_w(state, toggle.i, toggle.j, delta);
  } else {
    if (toggle.i >= state.n() || toggle.j >= state.n()) throw Error(ErrorKind::Dimension, "Y toggle out of range");
    if (toggle.i == toggle.j) throw Error(ErrorKind::SelfLoop, "Y toggle on the diagonal");
    if (state.y(toggle.i, toggle.j)) state.toggle_y(toggle.i, toggle.j);
    set.add_delta_y(state, toggle.i, toggle.j, delta);
  }
  StatVector out;
  for (std::size_t k = 0; k < delta.size(); ++k) out.push_back({set.ids()[k], delta[k]});
  return out;
}

RealMatrix dyadic_covariate(const BinaryMatrix& w, const BinaryMatrix& q) {
  const std::size_t n = w.rows();
  const std::size_t e = w.cols();
  if (q.rows() != e || q.cols() != e) throw Error(ErrorKind::Dimension, "Q must be e x e for dyadic_covariate");
  // wq(j, r) = sum_t W_jt Q_rt
  std::vector<double> wq(n * e, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t t = 0; t < e; ++t)
      if (w(j, t))
        for (std::size_t r = 0; r < e; ++r) wq[j * e + r] += q(r, t);
  RealMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = 0;
      for (std::size_t r = 0; r < e; ++r)
        if (w(i, r)) s += wq[j * e + r];
      h(i, j) = s;
    }
  return h;
}

double sample_sd(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0;
  for (double v : values) mean += v;
  mean /= double(n);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / double(n - 1));
}

double sample_skewness(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0;
  for (double v : values) mean += v;
  mean /= double(n);
  double m2 = 0, m3 = 0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= double(n);
  m3 /= double(n);
  if (m2 <= 0) return std::numeric_limits<double>::quiet_NaN();
  const double g1 = m3 / std::pow(m2, 1.5);
  const double nd = double(n);
  return g1 * std::sqrt(nd * (nd - 1)) / (nd - 2);
}

namespace {

double ratio(double num, double den) {
  if (den == 0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

}  // namespace

double clustering_one_mode(double triangles, double two_stars) { return ratio(3 * triangles, two_stars); }

double clustering_two_mode(double four_cycles, double three_paths) { return ratio(4 * four_cycles, three_paths); }

SummaryStats summary_stats(const NetworkState& s) {
  SummaryStats out;
  std::vector<double> deg;
  auto fill = [&](std::size_t count, auto fn) {
    deg.assign(count, 0);
    for (std::size_t k = 0; k < count; ++k) deg[k] = double(fn(k));
  };
  fill(s.n(), [&](std::size_t i) { return s.y_degree(i); });
  out.sd_degree_a = sample_sd(deg);
  out.skew_degree_a = sample_skewness(deg);
  fill(s.n(), [&](std::size_t i) { return s.x_degree(i); });
  out.sd_degree_xa = sample_sd(deg);
  out.skew_degree_xa = sample_skewness(deg);
  fill(s.e(), [&](std::size_t r) { return s.b_degree(r); });
  out.sd_degree_xb = sample_sd(deg);
  out.skew_degree_xb = sample_skewness(deg);
  fill(s.e(), [&](std::size_t r) { return s.q_degree(r); });
  out.sd_degree_b = sample_sd(deg);
  out.skew_degree_b = sample_skewness(deg);

  const std::vector<StatisticId> ids = {{"TriangleA"}, {"Star2A"}, {"X4Cycle"}, {"X3Path"}};
  const auto v = StatisticSet(ids).values(s);
  out.clustering_a = clustering_one_mode(v[0], v[1]);
  out.clustering_x = clustering_two_mode(v[2], v[3]);

  double q_tri = 0, q_star2 = 0;
  for (std::size_t r = 0; r < s.e(); ++r) {
    q_tri += double(s.top().q_triangles[r]);
    q_star2 += choose(s.q_degree(r), 2);
  }
  out.clustering_b = ratio(q_tri, q_star2);  // sum over r counts each triangle 3 times
  return out;
}

SummaryStats summary_stats(const MultilevelNetwork& net) { return summary_stats(NetworkState(net)); }

std::span<const std::string_view> summary_row_names() {
  static constexpr std::array<std::string_view, 11> names = {
      "stddev degreeA",   "skew degreeA",  "clusteringA",     "stddev degreeX A", "skew degreeX A", "stddev degreeX B",
      "skew degreeX B",   "clusteringX",   "stddev degreeB",  "skew degreeB",     "clusteringB"};
  return names;
}

std::vector<std::pair<std::string, double>> SummaryStats::rows() const {
  const std::array<double, 11> values = {sd_degree_a,  skew_degree_a, clustering_a, sd_degree_xa,
                                         skew_degree_xa, sd_degree_xb, skew_degree_xb, clustering_x,
                                         sd_degree_b,  skew_degree_b, clustering_b};
  std::vector<std::pair<std::string, double>> out;
  const auto names = summary_row_names();
  for (std::size_t k = 0; k < values.size(); ++k) out.emplace_back(std::string(names[k]), values[k]);
  return out;
}

}  // namespace nonml
