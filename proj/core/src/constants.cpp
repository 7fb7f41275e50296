#include "gbw/constants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gbw/errors.hpp"
#include "gbw/limits.hpp"
#include "gbw/norm_table.hpp"
#include "gbw/oracles.hpp"
#include "scan_util.hpp"

namespace gbw {

std::string to_string(ConstantTag t) {
  switch (t) {
    case ConstantTag::SuppUncond: return "SuppUncond";
    case ConstantTag::Uncond: return "Uncond";
    case ConstantTag::QuasiGreedy: return "QuasiGreedy";
    case ConstantTag::Democracy: return "Democracy";
    case ConstantTag::MaxConservative: return "MaxConservative";
    case ConstantTag::Conservative: return "Conservative";
    case ConstantTag::ReverseConservative: return "ReverseConservative";
    case ConstantTag::SLC: return "SLC";
    case ConstantTag::PSLC: return "PSLC";
    case ConstantTag::LSLC: return "LSLC";
    case ConstantTag::RSLC: return "RSLC";
    case ConstantTag::AlmostGreedy: return "AlmostGreedy";
    case ConstantTag::PartiallyGreedy: return "PartiallyGreedy";
    case ConstantTag::Greedy: return "Greedy";
    case ConstantTag::DKPartial: return "DKPartial";
    case ConstantTag::ReversePartial: return "ReversePartial";
    case ConstantTag::OmegaSLC: return "OmegaSLC";
    case ConstantTag::PsiPSLC: return "PsiPSLC";
  }
  throw std::logic_error("unknown ConstantTag");
}

ConstantTag constant_tag_from_string(const std::string& s) {
  static const std::vector<ConstantTag> all = {
      ConstantTag::SuppUncond,      ConstantTag::Uncond,
      ConstantTag::QuasiGreedy,     ConstantTag::Democracy,
      ConstantTag::MaxConservative, ConstantTag::Conservative,
      ConstantTag::ReverseConservative, ConstantTag::SLC,
      ConstantTag::PSLC,            ConstantTag::LSLC,
      ConstantTag::RSLC,            ConstantTag::AlmostGreedy,
      ConstantTag::PartiallyGreedy, ConstantTag::Greedy,
      ConstantTag::DKPartial,       ConstantTag::ReversePartial,
      ConstantTag::OmegaSLC,        ConstantTag::PsiPSLC};
  for (ConstantTag t : all)
    if (to_string(t) == s) return t;
  throw std::invalid_argument("unknown constant kind: " + s);
}

bool tag_has_lambda(ConstantTag t) {
  return t != ConstantTag::SuppUncond && t != ConstantTag::Uncond &&
         t != ConstantTag::QuasiGreedy;
}

void ConstantKind::validate() const {
  if (has_lambda() && !(lambda >= 1.0))
    throw std::invalid_argument("constant kind " + to_string(tag) +
                                " requires lambda >= 1");
}

std::string ConstantKind::display() const {
  if (!has_lambda()) return to_string(tag);
  return to_string(tag) + "(" + std::to_string(lambda) + ")";
}

long long ceil_scaled(double lambda, long long m) {
  const double p = lambda * static_cast<double>(m);
  const double r = std::round(p);
  if (std::abs(p - r) < 1e-9) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(p));
}

bool card_le(double lhs, double rhs) { return lhs <= rhs + 1e-9; }

namespace {

// Smallest integer >= v, snapping near-integers.
long long iceil_snap(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(v));
}

}  // namespace

void SearchBudget::validate() const {
  if (max_support < 0) throw std::invalid_argument("budget: max_support < 0");
  if (coeff_grid.empty()) throw std::invalid_argument("budget: empty coeff grid");
  if (window < 1) throw std::invalid_argument("budget: window must be >= 1");
  if (max_m < 0) throw std::invalid_argument("budget: max_m < 0");
  if (max_set < 0) throw std::invalid_argument("budget: max_set < 0");
  if (ordering_cap < 1) throw std::invalid_argument("budget: ordering_cap < 1");
}

namespace {

// Distinct positive moduli of the grid, ascending. Zero and signs are
// covered by support choice and sign-orbit invariance.
std::vector<double> grid_moduli(const std::vector<double>& grid) {
  std::vector<double> mods;
  for (double g : grid)
    if (g != 0.0) mods.push_back(std::abs(g));
  std::sort(mods.begin(), mods.end());
  mods.erase(std::unique(mods.begin(), mods.end()), mods.end());
  if (mods.empty()) throw std::invalid_argument("coeff grid has no nonzero value");
  return mods;
}

struct ScanState {
  double best = 0.0;
  bool found = false;
  long long scanned = 0;
  std::optional<Witness> witness;
};

template <typename MakeW>
void consider(ScanState& st, double num, double den, MakeW&& make) {
  if (den <= 0.0) {
    // Zero denominators only pair with zero numerators on these spaces
    // (norms are positive definite on nonzero vectors); such 0/0 instances
    // are skipped and never produce a witness.
    if (num > 1e-12)
      throw std::logic_error("estimate scan hit a positive/zero ratio");
    return;
  }
  ++st.scanned;
  const double r = num / den;
  if (!st.found || r > st.best) {
    st.best = r;
    st.witness = make();
    st.found = true;
  }
}

// Visits supports (ordered by size then lex) with every coefficient
// pattern over the moduli (odometer, last position fastest).
void for_each_vector(const SpaceSpec& space, const SearchBudget& budget,
                     const std::function<void(const CoeffVector&)>& fn) {
  const IndexSet window = sets::range(1, budget.window);
  const std::vector<double> mods = grid_moduli(budget.coeff_grid);
  for (long long k = 0; k <= std::min<long long>(budget.max_support,
                                                 static_cast<long long>(window.size()));
       ++k) {
    scan::for_each_combination(window, k, [&](const IndexSet& supp) {
      std::vector<std::size_t> digit(supp.size(), 0);
      while (true) {
        CoeffVector x(space.dim_cap);
        for (std::size_t i = 0; i < supp.size(); ++i) x.set(supp[i], mods[digit[i]]);
        fn(x);
        std::size_t i = supp.size();
        while (i-- > 0) {
          if (++digit[i] < mods.size()) break;
          digit[i] = 0;
          if (i == 0) return true;
        }
        if (supp.empty()) return true;
      }
    });
  }
}

void require_unit_grid(const ConstantKind& kind, const SearchBudget& budget) {
  for (double g : budget.coeff_grid)
    if (std::abs(g) > 1.0)
      throw std::invalid_argument("coeff grid must lie in [-1, 1] for kind " +
                                  to_string(kind.tag) +
                                  " (its vectors satisfy sup-norm <= 1)");
}

int highest_pos(std::uint32_t mask) { return 31 - std::countl_zero(mask); }
int lowest_pos(std::uint32_t mask) { return std::countr_zero(mask); }

// max A < min B over window positions; empty sets compare true.
bool mask_below(std::uint32_t a, std::uint32_t b) {
  if (a == 0 || b == 0) return true;
  return highest_pos(a) < lowest_pos(b);
}

Witness make_set_witness(const NormTable& t, std::uint32_t amask, std::uint32_t bmask) {
  Witness w;
  w.A = t.set_of(amask);
  w.B = t.set_of(bmask);
  return w;
}

Witness make_vector_witness(const CoeffVector& x, const NormTable& t,
                            std::uint32_t amask, std::uint32_t bmask) {
  Witness w;
  w.x = x;
  w.A = t.set_of(amask);
  w.B = t.set_of(bmask);
  w.eps = SignVector::all_plus(*w.A);
  w.delta = SignVector::all_plus(*w.B);
  return w;
}

void scan_set_pairs(const SpaceSpec& space, const ConstantKind& kind,
                    const SearchBudget& budget, ScanState& st) {
  const IndexSet window = sets::range(1, budget.window);
  const NormTable t(space, window, std::vector<double>(window.size(), 1.0));
  const int w = t.width();
  std::vector<int> all_pos(static_cast<std::size_t>(w));
  std::iota(all_pos.begin(), all_pos.end(), 0);
  const long long cap = budget.max_set > 0 ? std::min(budget.max_set, w) : w;

  for (long long a_size = 0; a_size <= cap; ++a_size) {
    scan::sized_subsets(all_pos, a_size, [&](std::uint32_t amask) {
      const Index max_a = amask ? window[static_cast<std::size_t>(highest_pos(amask))] : 0;
      double need = 0.0;
      switch (kind.tag) {
        case ConstantTag::Democracy:
        case ConstantTag::Conservative:
        case ConstantTag::ReverseConservative:
          need = kind.lambda * static_cast<double>(a_size);
          break;
        case ConstantTag::MaxConservative:
          need = (kind.lambda - 1.0) * static_cast<double>(max_a) +
                 static_cast<double>(a_size);
          break;
        default:
          throw std::logic_error("scan_set_pairs: wrong kind");
      }
      const long long b_min = std::max<long long>(0, iceil_snap(need));
      for (long long b_size = b_min; b_size <= cap; ++b_size) {
        scan::sized_subsets(all_pos, b_size, [&](std::uint32_t bmask) {
          switch (kind.tag) {
            case ConstantTag::Democracy:
              break;  // overlap permitted
            case ConstantTag::Conservative:
            case ConstantTag::MaxConservative:
              if (!mask_below(amask, bmask)) return;
              break;
            case ConstantTag::ReverseConservative:
              if (!mask_below(bmask, amask)) return;
              break;
            default:
              break;
          }
          consider(st, t[amask], t[bmask],
                   [&] { return make_set_witness(t, amask, bmask); });
        });
      }
    });
  }
}

void scan_slc_family(const SpaceSpec& space, const ConstantKind& kind,
                     const SearchBudget& budget, ScanState& st) {
  require_unit_grid(kind, budget);
  const IndexSet window = sets::range(1, budget.window);
  for_each_vector(space, budget, [&](const CoeffVector& x) {
    const NormTable t = NormTable::ones_padded(space, x, window);
    const int w = t.width();
    const std::uint32_t smask = t.mask_of(x.support());
    const std::uint32_t rest = t.full_mask() & ~smask;
    const std::vector<int> rest_pos = scan::positions_of(rest, w);
    const long long cap =
        budget.max_set > 0
            ? std::min<long long>(budget.max_set, static_cast<long long>(rest_pos.size()))
            : static_cast<long long>(rest_pos.size());
    const int min_s_pos = smask ? lowest_pos(smask) : w;

    for (long long a_size = 0; a_size <= cap; ++a_size) {
      scan::sized_subsets(rest_pos, a_size, [&](std::uint32_t amask) {
        if (kind.tag == ConstantTag::PSLC && amask && smask &&
            highest_pos(amask) >= min_s_pos)
          return;  // PSLC needs A < supp(x)
        const Index max_a =
            amask ? window[static_cast<std::size_t>(highest_pos(amask))] : 0;
        double need;
        if (kind.tag == ConstantTag::PSLC)
          need = (kind.lambda - 1.0) * static_cast<double>(max_a) +
                 static_cast<double>(a_size);
        else
          need = kind.lambda * static_cast<double>(a_size);
        const long long b_min = std::max<long long>(0, iceil_snap(need));

        const std::vector<int> b_pool = scan::positions_of(rest & ~amask, w);
        for (long long b_size = b_min;
             b_size <= std::min(cap, static_cast<long long>(b_pool.size())); ++b_size) {
          scan::sized_subsets(b_pool, b_size, [&](std::uint32_t bmask) {
            switch (kind.tag) {
              case ConstantTag::SLC:
                break;
              case ConstantTag::LSLC:
              case ConstantTag::PSLC:
                if (!mask_below(amask, bmask)) return;
                break;
              case ConstantTag::RSLC:
                if (!mask_below(bmask, amask)) return;
                break;
              default:
                break;
            }
            consider(st, t[smask | amask], t[smask | bmask],
                     [&] { return make_vector_witness(x, t, amask, bmask); });
          });
        }
      });
    }
  });
}

void scan_omega_psi(const SpaceSpec& space, const ConstantKind& kind,
                    const SearchBudget& budget, ScanState& st) {
  require_unit_grid(kind, budget);
  const IndexSet window = sets::range(1, budget.window);
  for_each_vector(space, budget, [&](const CoeffVector& x) {
    const NormTable t = NormTable::ones_padded(space, x, window);
    const int w = t.width();
    const std::uint32_t smask = t.mask_of(x.support());
    const std::uint32_t rest = t.full_mask() & ~smask;
    const std::vector<int> s_pos = scan::positions_of(smask, w);
    const std::vector<int> rest_pos = scan::positions_of(rest, w);
    const long long cap =
        budget.max_set > 0
            ? std::min<long long>(budget.max_set, static_cast<long long>(w))
            : static_cast<long long>(w);

    auto emit = [&](std::uint32_t amask, Index max_a) {
      // A outside supp(x) only tightens the cardinality constraint without
      // changing either norm, so A ranges over supp(x) (prefixes for Psi).
      double need;
      if (kind.tag == ConstantTag::PsiPSLC)
        need = (kind.lambda - 1.0) * static_cast<double>(max_a) +
               static_cast<double>(std::popcount(amask));
      else
        need = kind.lambda * static_cast<double>(std::popcount(amask));
      const long long b_min = std::max<long long>(0, iceil_snap(need));
      for (long long b_size = b_min;
           b_size <= std::min(cap, static_cast<long long>(rest_pos.size())); ++b_size) {
        scan::sized_subsets(rest_pos, b_size, [&](std::uint32_t bmask) {
          if (kind.tag == ConstantTag::PsiPSLC && !mask_below(amask, bmask)) return;
          const double den = t[(smask & ~amask) | bmask];
          consider(st, t[smask], den, [&] {
            Witness ww;
            ww.x = x;
            ww.A = t.set_of(amask);
            ww.B = t.set_of(bmask);
            ww.eps = SignVector::all_plus(*ww.B);
            return ww;
          });
        });
      }
    };

    if (kind.tag == ConstantTag::OmegaSLC) {
      for (long long a_size = 0;
           a_size <= std::min(cap, static_cast<long long>(s_pos.size())); ++a_size)
        scan::sized_subsets(s_pos, a_size, [&](std::uint32_t amask) {
          const Index max_a =
              amask ? window[static_cast<std::size_t>(highest_pos(amask))] : 0;
          emit(amask, max_a);
        });
    } else {
      // Psi: A < supp(x - P_A x) forces A to be a prefix of the support.
      std::uint32_t amask = 0;
      emit(0, 0);
      for (std::size_t j = 0; j < s_pos.size(); ++j) {
        amask |= 1u << s_pos[j];
        if (static_cast<long long>(j) + 1 > cap) break;
        emit(amask, window[static_cast<std::size_t>(s_pos[j])]);
      }
    }
  });
}

// First greedy set achieving gamma, in member order.
IndexSet gamma_argmax(const SpaceSpec& space, const CoeffVector& x, long long m) {
  if (m >= static_cast<long long>(x.support_size())) {
    if (m == 0) return {};
    GreedyFamily fam = greedy_sets(x, m);
    return fam.members().front();
  }
  const NormTable t = NormTable::for_vector(space, x);
  const GreedyFamily fam = greedy_sets(x, m);
  double best = -1.0;
  IndexSet arg;
  fam.for_each_member([&](const IndexSet& member) {
    const double v = t[t.full_mask() & ~t.mask_of(member)];
    if (v > best) {
      best = v;
      arg = member;
    }
    return true;
  });
  return arg;
}

// First minimizing set for the Proj/Partial/Best denominators.
IndexSet sigma_argmin_set(const SpaceSpec& space, const ConstantTag tag,
                          const CoeffVector& x, long long m) {
  const NormTable t = NormTable::for_vector(space, x);
  const std::uint32_t full = t.full_mask();
  IndexSet arg;
  double best = std::numeric_limits<double>::infinity();
  if (tag == ConstantTag::PartiallyGreedy) {
    best = t[full];
    std::uint32_t prefix = 0;
    for (int i = 0; i < t.width(); ++i) {
      if (t.window()[static_cast<std::size_t>(i)] > m) break;
      prefix |= 1u << i;
      if (t[full & ~prefix] < best) {
        best = t[full & ~prefix];
        arg = t.set_of(prefix);
      }
    }
    return arg;
  }
  const long long k = std::popcount(full);
  std::vector<int> pool = scan::positions_of(full, t.width());
  const long long exact = tag == ConstantTag::AlmostGreedy ? std::min(m, k) : -1;
  for (long long size = (exact >= 0 ? exact : 0);
       size <= (exact >= 0 ? exact : std::min(m, k)); ++size) {
    scan::sized_subsets(pool, size, [&](std::uint32_t s) {
      if (t[full & ~s] < best) {
        best = t[full & ~s];
        arg = t.set_of(s);
      }
    });
  }
  return arg;
}

void scan_greedy_ratios(const SpaceSpec& space, const ConstantKind& kind,
                        const SearchBudget& budget, ScanState& st) {
  for_each_vector(space, budget, [&](const CoeffVector& x) {
    const NormTable t = NormTable::for_vector(space, x);
    const std::uint32_t full = t.full_mask();
    for (long long m = 0; m <= budget.max_m; ++m) {
      const long long gm =
          kind.tag == ConstantTag::QuasiGreedy ? m : ceil_scaled(kind.lambda, m);
      const double num = detail::gamma_t(t, full, gm);
      double den = 0.0;
      switch (kind.tag) {
        case ConstantTag::QuasiGreedy: den = t[full]; break;
        case ConstantTag::AlmostGreedy: den = detail::sigma_proj_t(t, full, m); break;
        case ConstantTag::PartiallyGreedy: den = detail::sigma_partial_t(t, full, m); break;
        case ConstantTag::Greedy: den = detail::sigma_best_t(t, full, m); break;
        default: throw std::logic_error("scan_greedy_ratios: wrong kind");
      }
      consider(st, num, den, [&] {
        Witness w;
        w.x = x;
        w.m = m;
        w.Lambda = gamma_argmax(space, x, gm);
        if (kind.tag != ConstantTag::QuasiGreedy)
          w.B = sigma_argmin_set(space, kind.tag, x, m);
        return w;
      });
    }
  });
}

void scan_dk_ratios(const SpaceSpec& space, const ConstantKind& kind,
                    const SearchBudget& budget, ScanState& st) {
  for_each_vector(space, budget, [&](const CoeffVector& x) {
    if (x.empty()) return;
    const NormTable t = NormTable::for_vector(space, x);
    const std::uint32_t full = t.full_mask();
    const OrderingEnumeration orderings = greedy_orderings(x, budget.ordering_cap);
    for (const GreedyOrdering& rho : orderings.orderings) {
      for (long long m = 0; m <= budget.max_m; ++m) {
        const long long gm = ceil_scaled(kind.lambda, m);
        std::uint32_t prefix = 0;
        for (long long j = 0;
             j < std::min(gm, static_cast<long long>(rho.order.size())); ++j)
          prefix |= 1u << t.pos_of(rho.order[static_cast<std::size_t>(j)]);
        const double num = t[full & ~prefix];

        double den;
        if (kind.tag == ConstantTag::DKPartial) {
          const Index rho1 = rho.order.front();
          std::uint32_t allowed = 0;
          for (int i = 0; i < t.width(); ++i)
            if (t.window()[static_cast<std::size_t>(i)] < rho1) allowed |= 1u << i;
          den = detail::min_norm_dropping(t, full, allowed, m);
        } else {
          if (m == 0) {
            den = t[full];
          } else {
            const Index tau = ordering_at(rho, x, m);
            std::uint32_t allowed = 0;
            for (int i = 0; i < t.width(); ++i)
              if (t.window()[static_cast<std::size_t>(i)] > tau) allowed |= 1u << i;
            den = detail::min_norm_dropping(t, full, allowed, m);
          }
        }
        consider(st, num, den, [&] {
          Witness w;
          w.x = x;
          w.m = m;
          w.ordering = rho;
          return w;
        });
      }
    }
  });
}

void scan_unconditionality(const SpaceSpec& space, const ConstantKind& kind,
                           const SearchBudget& budget, ScanState& st) {
  const std::vector<double> mods = grid_moduli(budget.coeff_grid);
  for_each_vector(space, budget, [&](const CoeffVector& x) {
    if (x.empty()) return;
    const NormTable t = NormTable::for_vector(space, x);
    const std::uint32_t full = t.full_mask();
    if (kind.tag == ConstantTag::SuppUncond) {
      std::vector<int> pool = scan::positions_of(full, t.width());
      for (long long size = 0; size <= static_cast<long long>(pool.size()); ++size)
        scan::sized_subsets(pool, size, [&](std::uint32_t amask) {
          consider(st, t[amask], t[full], [&] {
            Witness w;
            w.x = x;
            w.A = t.set_of(amask);
            return w;
          });
        });
      return;
    }
    // Uncond: dominated coefficient patterns a with |a_n| <= |x_n|.
    const IndexSet supp = x.support();
    std::vector<std::vector<double>> choices(supp.size());
    for (std::size_t i = 0; i < supp.size(); ++i) {
      choices[i].push_back(0.0);
      for (double g : mods)
        if (g <= std::abs(x.coeff(supp[i]))) choices[i].push_back(g);
    }
    std::vector<std::size_t> digit(supp.size(), 0);
    const double den = t[full];
    while (true) {
      CoeffVector a(space.dim_cap);
      for (std::size_t i = 0; i < supp.size(); ++i)
        a.set(supp[i], choices[i][digit[i]]);
      consider(st, eval_norm(space, a), den, [&] {
        Witness w;
        w.x = x;
        w.x2 = a;
        return w;
      });
      std::size_t i = supp.size();
      bool done = true;
      while (i-- > 0) {
        if (++digit[i] < choices[i].size()) {
          done = false;
          break;
        }
        digit[i] = 0;
      }
      if (done) break;
    }
  });
}

}  // namespace

ConstantEstimate estimate_constant(const SpaceSpec& space, const ConstantKind& kind,
                                   const SearchBudget& budget) {
  space.validate();
  kind.validate();
  budget.validate();
  if (budget.window > space.dim_cap)
    throw std::invalid_argument("budget window exceeds the space dim_cap");

  ScanState st;
  switch (kind.tag) {
    case ConstantTag::Democracy:
    case ConstantTag::MaxConservative:
    case ConstantTag::Conservative:
    case ConstantTag::ReverseConservative:
      scan_set_pairs(space, kind, budget, st);
      break;
    case ConstantTag::SLC:
    case ConstantTag::PSLC:
    case ConstantTag::LSLC:
    case ConstantTag::RSLC:
      scan_slc_family(space, kind, budget, st);
      break;
    case ConstantTag::OmegaSLC:
    case ConstantTag::PsiPSLC:
      scan_omega_psi(space, kind, budget, st);
      break;
    case ConstantTag::QuasiGreedy:
    case ConstantTag::AlmostGreedy:
    case ConstantTag::PartiallyGreedy:
    case ConstantTag::Greedy:
      scan_greedy_ratios(space, kind, budget, st);
      break;
    case ConstantTag::DKPartial:
    case ConstantTag::ReversePartial:
      scan_dk_ratios(space, kind, budget, st);
      break;
    case ConstantTag::SuppUncond:
    case ConstantTag::Uncond:
      scan_unconditionality(space, kind, budget, st);
      break;
  }

  ConstantEstimate est;
  est.kind = kind;
  est.budget = budget;
  est.instances_scanned = st.scanned;
  if (!st.found) {
    est.domain_empty = true;
    est.value = 0.0;
    return est;
  }
  est.value = st.best;
  est.witness = st.witness;
  return est;
}

namespace {

CoeffVector witness_x_or_zero(const SpaceSpec& space, const Witness& w) {
  return w.x ? *w.x : CoeffVector(space.dim_cap);
}

SignVector signs_or_plus(const std::optional<SignVector>& s, const IndexSet& on) {
  return s ? *s : SignVector::all_plus(on);
}

}  // namespace

double reevaluate(const SpaceSpec& space, const ConstantKind& kind,
                  const Witness& w) {
  kind.validate();
  switch (kind.tag) {
    case ConstantTag::Democracy:
    case ConstantTag::MaxConservative:
    case ConstantTag::Conservative:
    case ConstantTag::ReverseConservative: {
      if (!w.A || !w.B) throw std::invalid_argument("reevaluate: sets missing");
      const double den =
          eval_norm(space, CoeffVector::indicator(*w.B, space.dim_cap));
      if (den == 0.0) throw std::invalid_argument("reevaluate: ||1_B|| = 0");
      return eval_norm(space, CoeffVector::indicator(*w.A, space.dim_cap)) / den;
    }
    case ConstantTag::SLC:
    case ConstantTag::PSLC:
    case ConstantTag::LSLC:
    case ConstantTag::RSLC: {
      if (!w.A || !w.B) throw std::invalid_argument("reevaluate: sets missing");
      const CoeffVector x = witness_x_or_zero(space, w);
      const CoeffVector xa = x.plus(CoeffVector::signed_indicator(
          *w.A, signs_or_plus(w.eps, *w.A), space.dim_cap));
      const CoeffVector xb = x.plus(CoeffVector::signed_indicator(
          *w.B, signs_or_plus(w.delta, *w.B), space.dim_cap));
      const double den = eval_norm(space, xb);
      if (den == 0.0) throw std::invalid_argument("reevaluate: zero denominator");
      return eval_norm(space, xa) / den;
    }
    case ConstantTag::OmegaSLC:
    case ConstantTag::PsiPSLC: {
      if (!w.A || !w.B) throw std::invalid_argument("reevaluate: sets missing");
      const CoeffVector x = witness_x_or_zero(space, w);
      CoeffVector rhs = project(x, sets::set_minus(x.support(), *w.A));
      rhs = rhs.plus(CoeffVector::signed_indicator(
          *w.B, signs_or_plus(w.eps, *w.B), space.dim_cap));
      const double den = eval_norm(space, rhs);
      if (den == 0.0) throw std::invalid_argument("reevaluate: zero denominator");
      return eval_norm(space, x) / den;
    }
    case ConstantTag::QuasiGreedy: {
      if (!w.x || !w.m) throw std::invalid_argument("reevaluate: x or m missing");
      const double den = eval_norm(space, *w.x);
      if (den == 0.0) throw std::invalid_argument("reevaluate: ||x|| = 0");
      return gamma(space, *w.x, *w.m) / den;
    }
    case ConstantTag::AlmostGreedy:
    case ConstantTag::PartiallyGreedy:
    case ConstantTag::Greedy: {
      if (!w.x || !w.m) throw std::invalid_argument("reevaluate: x or m missing");
      const long long gm = ceil_scaled(kind.lambda, *w.m);
      SigmaKind sk = kind.tag == ConstantTag::AlmostGreedy ? SigmaKind::proj()
                     : kind.tag == ConstantTag::PartiallyGreedy
                         ? SigmaKind::partial()
                         : SigmaKind::best();
      const double den = sigma(space, sk, *w.x, *w.m);
      if (den == 0.0) throw std::invalid_argument("reevaluate: zero denominator");
      return gamma(space, *w.x, gm) / den;
    }
    case ConstantTag::DKPartial:
    case ConstantTag::ReversePartial: {
      if (!w.x || !w.m || !w.ordering)
        throw std::invalid_argument("reevaluate: x, m or ordering missing");
      const long long gm = ceil_scaled(kind.lambda, *w.m);
      IndexSet prefix;
      for (long long j = 0;
           j < std::min(gm, static_cast<long long>(w.ordering->order.size())); ++j)
        prefix.push_back(w.ordering->order[static_cast<std::size_t>(j)]);
      prefix = sets::normalized(prefix);
      const CoeffVector remainder =
          project(*w.x, sets::set_minus(w.x->support(), prefix));
      const SigmaKind sk = kind.tag == ConstantTag::DKPartial
                               ? SigmaKind::left_dk(*w.ordering)
                               : SigmaKind::right_dk(*w.ordering);
      const double den = sigma(space, sk, *w.x, *w.m);
      if (den == 0.0) throw std::invalid_argument("reevaluate: zero denominator");
      return eval_norm(space, remainder) / den;
    }
    case ConstantTag::SuppUncond: {
      if (!w.x || !w.A) throw std::invalid_argument("reevaluate: x or A missing");
      const double den = eval_norm(space, *w.x);
      if (den == 0.0) throw std::invalid_argument("reevaluate: ||x|| = 0");
      return eval_norm(space, project(*w.x, *w.A)) / den;
    }
    case ConstantTag::Uncond: {
      if (!w.x || !w.x2) throw std::invalid_argument("reevaluate: vectors missing");
      const double den = eval_norm(space, *w.x);
      if (den == 0.0) throw std::invalid_argument("reevaluate: ||x|| = 0");
      return eval_norm(space, *w.x2) / den;
    }
  }
  throw std::logic_error("unknown ConstantTag");
}

namespace {

// gamma-achieving greedy set and sigma-achieving set for the reverse
// transports; m already scaled where needed.
std::pair<Witness, double> transport_slc_to_ratio(const SpaceSpec& space,
                                                  const ConstantKind& from,
                                                  const ConstantKind& to,
                                                  const Witness& w) {
  if (!w.A || !w.B) throw std::invalid_argument("transport: sets missing");
  const CoeffVector x = witness_x_or_zero(space, w);
  CoeffVector y = x.plus(CoeffVector::signed_indicator(
      *w.A, signs_or_plus(w.eps, *w.A), space.dim_cap));
  y = y.plus(CoeffVector::signed_indicator(*w.B, signs_or_plus(w.delta, *w.B),
                                           space.dim_cap));
  const long long m = static_cast<long long>(w.A->size());
  const long long gm = ceil_scaled(from.lambda, m);
  IndexSet lam(w.B->begin(),
               w.B->begin() + std::min<std::size_t>(static_cast<std::size_t>(gm),
                                                    w.B->size()));
  Witness out;
  out.x = y;
  out.m = m;
  out.Lambda = lam;
  out.B = *w.A;  // the projection set bounding the denominator
  return {out, reevaluate(space, to, out)};
}

std::pair<Witness, double> transport_pslc_to_partial(const SpaceSpec& space,
                                                     const ConstantKind& from,
                                                     const ConstantKind& to,
                                                     const Witness& w) {
  if (!w.A || !w.B) throw std::invalid_argument("transport: sets missing");
  const CoeffVector x = witness_x_or_zero(space, w);
  const long long m = w.A->empty() ? 0 : w.A->back();
  const IndexSet d = sets::set_minus(sets::range(1, m), *w.A);
  CoeffVector y = CoeffVector::indicator(d, space.dim_cap);
  y = y.plus(CoeffVector::signed_indicator(*w.A, signs_or_plus(w.eps, *w.A),
                                           space.dim_cap));
  y = y.plus(x);
  y = y.plus(CoeffVector::signed_indicator(*w.B, signs_or_plus(w.delta, *w.B),
                                           space.dim_cap));
  Witness out;
  out.x = y;
  out.m = m;
  out.D = d;
  (void)from;
  return {out, reevaluate(space, to, out)};
}

std::pair<Witness, double> transport_ratio_to_form(const SpaceSpec& space,
                                                   const ConstantKind& from,
                                                   const ConstantKind& to,
                                                   const Witness& w) {
  if (!w.x || !w.m) throw std::invalid_argument("transport: x or m missing");
  const CoeffVector& x = *w.x;
  const long long m = *w.m;
  const long long gm = ceil_scaled(from.lambda, m);
  if (gm == 0 || gm > static_cast<long long>(x.support_size())) {
    // Degenerate greedy sum; the form inequality holds trivially with the
    // empty sets.
    Witness out;
    const double peak = x.sup_norm();
    out.x = peak > 0.0 ? x.scaled(1.0 / peak) : x;
    out.A = IndexSet{};
    out.B = IndexSet{};
    out.eps = SignVector::all_plus({});
    return {out, x.empty() ? 1.0 : reevaluate(space, to, out)};
  }

  const IndexSet a = w.Lambda && !w.Lambda->empty()
                         ? *w.Lambda
                         : gamma_argmax(space, x, gm);
  IndexSet b;
  if (w.B) {
    b = *w.B;
  } else {
    const ConstantTag base = from.tag;
    b = sigma_argmin_set(space, base, x, m);
  }

  double alpha = std::numeric_limits<double>::infinity();
  for (Index n : a) alpha = std::min(alpha, std::abs(x.coeff(n)));
  if (!(alpha > 0.0))
    throw std::invalid_argument("transport: greedy set threshold is zero");

  Witness out;
  if (to.tag == ConstantTag::OmegaSLC) {
    const CoeffVector xhat =
        project(x, sets::set_minus(x.support(), a)).scaled(1.0 / alpha);
    const IndexSet bs = sets::set_minus(a, b);  // keeps signed spikes
    std::vector<int> signs;
    for (Index n : bs) signs.push_back(x.coeff(n) < 0 ? -1 : 1);
    out.x = xhat;
    out.A = sets::set_minus(b, a);
    out.B = bs;
    out.eps = SignVector::make(bs, signs);
  } else {
    // PartiallyGreedy -> PsiPSLC; b here is the best removed prefix set.
    const Index k = b.empty() ? 0 : b.back();
    const IndexSet bpsi = sets::set_minus(sets::range(1, k), a);
    const IndexSet f = sets::set_minus(a, sets::range(1, k));
    std::vector<int> signs;
    for (Index n : f) signs.push_back(x.coeff(n) < 0 ? -1 : 1);
    const CoeffVector xhat =
        project(x, sets::set_minus(x.support(), a)).scaled(1.0 / alpha);
    out.x = xhat;
    out.A = bpsi;
    out.B = f;
    out.eps = SignVector::make(f, signs);
  }
  return {out, reevaluate(space, to, out)};
}

}  // namespace

std::pair<Witness, double> witness_transport(const SpaceSpec& space,
                                             const ConstantKind& from_kind,
                                             const ConstantKind& to_kind,
                                             const Witness& witness) {
  space.validate();
  from_kind.validate();
  to_kind.validate();

  if (from_kind.tag == to_kind.tag &&
      (!from_kind.has_lambda() || from_kind.lambda == to_kind.lambda))
    return {witness, reevaluate(space, from_kind, witness)};

  if (from_kind.has_lambda() && to_kind.has_lambda() &&
      from_kind.lambda != to_kind.lambda)
    throw UnsupportedOperationError(
        "witness_transport: the proof constructions preserve lambda");

  const auto pair_is = [&](ConstantTag f, ConstantTag t) {
    return from_kind.tag == f && to_kind.tag == t;
  };

  if (pair_is(ConstantTag::SLC, ConstantTag::AlmostGreedy) ||
      pair_is(ConstantTag::SLC, ConstantTag::Greedy))
    return transport_slc_to_ratio(space, from_kind, to_kind, witness);
  if (pair_is(ConstantTag::PSLC, ConstantTag::PartiallyGreedy))
    return transport_pslc_to_partial(space, from_kind, to_kind, witness);
  if (pair_is(ConstantTag::AlmostGreedy, ConstantTag::OmegaSLC) ||
      pair_is(ConstantTag::Greedy, ConstantTag::OmegaSLC) ||
      pair_is(ConstantTag::PartiallyGreedy, ConstantTag::PsiPSLC))
    return transport_ratio_to_form(space, from_kind, to_kind, witness);

  throw UnsupportedOperationError("witness_transport: unsupported pair " +
                                  from_kind.display() + " -> " +
                                  to_kind.display());
}

nlohmann::json to_json(const SearchBudget& b) {
  return {{"max_support", b.max_support}, {"coeff_grid", b.coeff_grid},
          {"index_window", b.window},     {"max_m", b.max_m},
          {"max_set", b.max_set},         {"ordering_cap", b.ordering_cap}};
}

SearchBudget budget_from_json(const nlohmann::json& j) {
  SearchBudget b;
  if (j.contains("max_support")) b.max_support = j.at("max_support").get<int>();
  if (j.contains("coeff_grid"))
    b.coeff_grid = j.at("coeff_grid").get<std::vector<double>>();
  if (j.contains("index_window")) b.window = j.at("index_window").get<Index>();
  if (j.contains("max_m")) b.max_m = j.at("max_m").get<int>();
  if (j.contains("max_set")) b.max_set = j.at("max_set").get<int>();
  if (j.contains("ordering_cap"))
    b.ordering_cap = j.at("ordering_cap").get<long long>();
  b.validate();
  return b;
}

namespace {

nlohmann::json coeffs_json(const CoeffVector& x) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [n, v] : x.entries()) arr.push_back({n, v});
  return arr;
}

nlohmann::json signs_json(const SignVector& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [n, v] : s.entries()) arr.push_back({n, v});
  return arr;
}

}  // namespace

nlohmann::json to_json(const Witness& w) {
  nlohmann::json j = nlohmann::json::object();
  if (w.x) j["x"] = coeffs_json(*w.x);
  if (w.x2) j["x2"] = coeffs_json(*w.x2);
  if (w.A) j["A"] = *w.A;
  if (w.B) j["B"] = *w.B;
  if (w.D) j["D"] = *w.D;
  if (w.Lambda) j["Lambda"] = *w.Lambda;
  if (w.eps) j["eps"] = signs_json(*w.eps);
  if (w.delta) j["delta"] = signs_json(*w.delta);
  if (w.m) j["m"] = *w.m;
  if (w.ordering) j["ordering"] = w.ordering->order;
  return j;
}

nlohmann::json to_json(const ConstantEstimate& e) {
  nlohmann::json j;
  j["kind"] = to_string(e.kind.tag);
  j["lambda"] = e.kind.has_lambda() ? nlohmann::json(e.kind.lambda)
                                    : nlohmann::json(nullptr);
  j["value"] = e.value;
  j["witness"] = e.witness ? to_json(*e.witness) : nlohmann::json(nullptr);
  j["budget"] = to_json(e.budget);
  j["domain_empty"] = e.domain_empty;
  j["instances_scanned"] = e.instances_scanned;
  return j;
}

}  // namespace gbw
