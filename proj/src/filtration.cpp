#include "isocrys/filtration.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "isocrys/errors.hpp"

namespace isocrys {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PMat to_L(const PMat& M, const FieldPtr& L) {
  FieldPtr K = field_of(M);
  if (!K || K == L) return realize(M, L);
  return embed(M, L);
}

PMat empty_cols(Eigen::Index n, const FieldPtr& K) { return PMat::Constant(n, 0, Padic::exact_zero(K)); }

// sigma(a) for the automorphism sending u to `img`.
Padic apply_image(const FieldPtr& L, const Padic& img, const Padic& a) {
  if (a.is_constant()) return a;
  Padic x = a.realize(L);
  std::vector<Padic> c = x.base_coordinates();
  Padic out = embed(c[0], L);
  Padic pw = L->one();
  for (size_t i = 1; i < c.size(); ++i) {
    pw = pw * img;
    out += embed(c[i], L) * pw;
  }
  return out;
}

bool same_group(const FiniteGroup& a, const FiniteGroup& b) { return a.order() == b.order() && a.table() == b.table(); }

std::vector<Rational> slope_set(const PhiModule& D) {
  std::vector<Rational> out;
  for (const auto& [s, m] : newton_slopes(D).slopes) out.push_back(s);
  return out;
}

// Gram matrix of J on the invariant basis W; its entries lie in K.
PMat descended_gram(const PMat& W, const PMat& J, const GaloisSetup& S) {
  PMat G = W.transpose() * to_L(J, S.top()) * W;
  if (S.top() == S.base()) return G;
  if (!in_subfield(G, S.base())) throw InternalContradiction("form on the invariant lattice is not K-valued");
  return restrict_to(G, S.base());
}

Filtration verified(const PhiModule& D, const PMat& J, const GroupAction& action, const GaloisSetup& S,
                    const Filtration& F, std::uint64_t seed, int budget, const char* what) {
  SymplecticSpace V(to_L(J, S.top()));
  if (!is_lagrangian(V, F.basis)) throw InternalContradiction(std::string(what) + ": result is not Lagrangian");
  if (!is_diagonally_stable(F, action, S)) throw InternalContradiction(std::string(what) + ": result is not stable");
  if (!check_admissible(D, F, SubmoduleMode::exact, seed, budget).admissible)
    throw InternalContradiction(std::string(what) + ": result failed admissibility re-verification");
  return F;
}

}  // namespace

// ---------------------------------------------------------------- Galois setup

GaloisSetup::GaloisSetup(FiniteGroup G, FieldPtr L, std::vector<Padic> images)
    : G_(std::move(G)), L_(std::move(L)), img_(std::move(images)) {
  K_ = L_->is_unramified() ? L_ : L_->base();
  const int n = G_.order();
  if (n != L_->e()) throw ValidationError("Galois group of order " + std::to_string(n) + " for an extension of degree " +
                                          std::to_string(L_->e()));
  if (static_cast<int>(img_.size()) != n) throw ValidationError("one automorphism per group element is required");
  for (auto& a : img_) a = a.realize(L_);
  if (n == 1) return;
  const Padic u = L_->uniformizer();
  if (img_[0] != u) throw ValidationError("the identity element must act trivially");
  // Each image is a root of the Eisenstein polynomial.
  const auto& eis = L_->spec().eisenstein;
  for (int g = 0; g < n; ++g) {
    Padic val = img_[g].pow(n);
    Padic pw = L_->one();
    for (size_t i = 0; i < eis.size(); ++i) {
      val += embed(Padic::from_coords(K_, {eis[i]}), L_) * pw;
      pw = pw * img_[g];
    }
    if (!val.is_zero()) throw ValidationError("image of the uniformizer under " + G_.name(g) + " is not a conjugate");
    for (int h = 0; h < g; ++h)
      if (img_[g] == img_[h])
        throw ValidationError("elements " + G_.name(h) + " and " + G_.name(g) + " give the same automorphism");
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (apply(h, img_[g]) != img_[G_.mul(g, h)])
        throw ValidationError("correspondence is not anti-multiplicative at (" + G_.name(g) + ", " + G_.name(h) + ")");
}

GaloisSetup GaloisSetup::from_generators(const FiniteGroup& G, const FieldPtr& L,
                                         const std::vector<std::pair<int, std::string>>& gens) {
  const Padic u = L->uniformizer();
  std::vector<std::pair<int, Padic>> gi;
  for (const auto& [g, name] : gens)
    gi.emplace_back(g, name == "id" ? u : L->apply_automorphism(L->automorphism_index(name), u));
  std::vector<std::optional<Padic>> img(static_cast<size_t>(G.order()));
  img[0] = u;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (const auto& [s, is] : gi) {
      int y = G.mul(x, s);
      Padic v = apply_image(L, is, *img[x]);
      if (!img[y]) {
        img[y] = v;
        queue.push_back(y);
      } else if (*img[y] != v) {
        throw ValidationError("automorphism assignment is inconsistent at " + G.name(y));
      }
    }
  }
  std::vector<Padic> out;
  for (int g = 0; g < G.order(); ++g) {
    if (!img[g]) throw ValidationError("listed elements do not generate the group");
    out.push_back(*img[g]);
  }
  return GaloisSetup(G, L, std::move(out));
}

GaloisSetup GaloisSetup::trivial(const FieldPtr& K) {
  return GaloisSetup(FiniteGroup::from_raw(1, {0}, {"e"}), K, {K->uniformizer()});
}

Padic GaloisSetup::apply(int g, const Padic& a) const {
  if (g == 0 || G_.order() == 1) return a;
  return apply_image(L_, img_[g], a);
}

PMat GaloisSetup::apply(int g, const PMat& M) const {
  return M.unaryExpr([&](const Padic& a) { return apply(g, a); });
}

// ---------------------------------------------------------------- descent data

DescentDatum descent_datum(const GroupAction& action) {
  DescentDatum f;
  const FiniteGroup& G = action.group();
  for (int h = 0; h < G.order(); ++h) f.maps.push_back(action(G.inv(h)));
  return f;
}

bool check_cocycle(const DescentDatum& f, const FiniteGroup& G) {
  if (static_cast<int>(f.maps.size()) != G.order()) return false;
  for (int g = 0; g < G.order(); ++g)
    for (int h = 0; h < G.order(); ++h)
      if (!is_zero(PMat(f.maps[G.mul(g, h)] - f.maps[h] * f.maps[g]))) return false;
  return true;
}

bool descent_carries(const DescentDatum& f, const Filtration& F, const GaloisSetup& S) {
  const FiniteGroup& G = S.group();
  if (static_cast<int>(f.maps.size()) != G.order()) return false;
  if (F.dim() == 0) return true;
  for (int h = 0; h < G.order(); ++h) {
    PMat lhs = to_L(f.maps[h], F.L) * F.basis;
    if (!same_span(lhs, S.apply(G.inv(h), F.basis))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- admissibility

int t_H(const Filtration& F, const PMat& N) {
  if (N.cols() == 0 || F.dim() == 0) return 0;
  return intersection_dim(F.basis, to_L(N, F.L));
}

AdmissibilityReport is_admissible(const PhiModule& D, const Filtration& F, SubmoduleMode mode, std::uint64_t seed,
                                  int budget) {
  AdmissibilityReport rep;
  rep.mode = mode;
  const int n = D.dim();
  std::vector<PMat> subs = submodules(D, mode, mode == SubmoduleMode::sampled ? budget : 0, seed);
  bool saw_full = false;
  for (const PMat& N : subs) {
    LedgerEntry e;
    e.N = N;
    e.dim = static_cast<int>(N.cols());
    e.t_H = t_H(F, N);
    e.bound = e.dim == 0 ? Rational(0) : t_N(e.dim == n ? D : D.restrict(N));
    const bool full = e.dim == n;
    saw_full = saw_full || full;
    e.ok = full ? Rational(e.t_H) == e.bound : Rational(e.t_H) <= e.bound;
    rep.ledger.push_back(std::move(e));
  }
  if (!saw_full) {
    LedgerEntry e;
    e.N = identity(n, D.field());
    e.dim = n;
    e.t_H = t_H(F, e.N);
    e.bound = t_N(D);
    e.ok = Rational(e.t_H) == e.bound;
    rep.ledger.push_back(std::move(e));
  }
  rep.samples = static_cast<int>(rep.ledger.size());
  for (std::size_t i = 0; i < rep.ledger.size(); ++i)
    if (!rep.ledger[i].ok) {
      rep.admissible = false;
      rep.violation = i;
      break;
    }
  return rep;
}

AdmissibilityReport check_admissible(const PhiModule& D, const Filtration& F, SubmoduleMode preferred,
                                     std::uint64_t seed, int budget) {
  if (preferred == SubmoduleMode::exact) {
    try {
      return is_admissible(D, F, SubmoduleMode::exact, seed, budget);
    } catch (const MultiplicityError&) {
    }
  }
  return is_admissible(D, F, SubmoduleMode::sampled, seed, budget);
}

// ---------------------------------------------------------------- stability and descent

bool is_diagonally_stable(const Filtration& F, const GroupAction& action, const GaloisSetup& S) {
  if (!same_group(action.group(), S.group())) throw ValidationError("action and Galois setup use different groups");
  if (F.dim() == 0) return true;
  for (int h = 1; h < action.group().order(); ++h) {
    PMat lin = to_L(action(h), F.L) * F.basis;
    if (!same_span(lin, S.apply(h, F.basis))) return false;
  }
  return true;
}

PMat galois_descend(const PMat& E, const std::vector<PMat>& M, const GaloisSetup& S) {
  const FieldPtr& L = S.top();
  const FiniteGroup& G = S.group();
  PMat EL = to_L(E, L);
  if (G.order() == 1) return EL;
  if (static_cast<int>(M.size()) != G.order()) throw ValidationError("one matrix per group element is required");
  std::vector<PMat> ML;
  for (const auto& m : M) ML.push_back(to_L(m, L));
  auto act = [&](int h, const PMat& v) { return PMat(ML[h] * S.apply(h, v)); };
  const int d = static_cast<int>(rank(EL));
  for (int h = 0; h < G.order(); ++h)
    if (!contains(EL, act(h, EL))) throw ValidationError("the space is not stable under the semilinear action");

  PMat out = empty_cols(EL.rows(), L);
  const Padic u = L->uniformizer();
  for (Eigen::Index j = 0; j < EL.cols() && out.cols() < d; ++j) {
    Padic alpha = L->one();
    for (int i = 0; i < L->e() && out.cols() < d; ++i, alpha = alpha * u) {
      PMat v = EL.col(j) * alpha;
      PMat w = act(0, v);
      for (int h = 1; h < G.order(); ++h) w += act(h, v);
      PMat cand = hstack(out, w);
      if (rank(cand) > out.cols()) out = cand;
    }
  }
  if (out.cols() != d) throw InternalContradiction("trace construction did not span the space");
  for (int h = 0; h < G.order(); ++h)
    if (!is_zero(PMat(act(h, out) - out))) throw InternalContradiction("descended vectors are not invariant");
  return out;
}

PMat descended_basis(const GroupAction& action, const GaloisSetup& S) {
  const FiniteGroup& G = action.group();
  if (!same_group(G, S.group())) throw ValidationError("action and Galois setup use different groups");
  std::vector<PMat> M;
  for (int h = 0; h < G.order(); ++h) M.push_back(action(G.inv(h)));
  return galois_descend(identity(action.dim(), action.field()), M, S);
}

// ---------------------------------------------------------------- constructions

Filtration two_slope_filtration(const PhiModule& D, const PMat& J, const GroupAction& action, const GaloisSetup& S,
                                std::uint64_t seed, int budget) {
  auto parts = isoclinic_decompose(D);
  if (parts.size() != 2 || parts[0].slope + parts[1].slope != Rational(1))
    throw ValidationError("two-slope construction needs slopes {mu, 1-mu} with mu != 1/2");
  const FieldPtr& L = S.top();
  PMat W = descended_basis(action, S);
  SymplecticSpace VW(descended_gram(W, J, S));
  PMat P0 = to_L(parts[0].basis, L), P1 = to_L(parts[1].basis, L);
  for (int attempt = 0; attempt < budget; ++attempt) {
    PMat C = random_rational_lagrangian(VW, mix(seed, static_cast<std::uint64_t>(attempt)));
    Filtration F{L, W * to_L(C, L)};
    if (intersection_dim(F.basis, P0) != 0 || intersection_dim(F.basis, P1) != 0) continue;
    return verified(D, J, action, S, F, seed, budget, "two-slope construction");
  }
  throw BudgetExhausted("no Lagrangian transverse to both slope parts in " + std::to_string(budget) +
                        " samples; retry with a larger budget");
}

Filtration supersingular_filtration(const PhiModule& D, const PMat& J, const GroupAction& action, const GaloisSetup& S,
                                    std::uint64_t seed, int budget, SupersingularRoute* route) {
  for (const Rational& s : slope_set(D))
    if (s != Rational(1, 2)) throw ValidationError("supersingular construction needs D isoclinic of slope 1/2");
  const FieldPtr& L = S.top();
  const FieldPtr& K0 = D.field();
  SupersingularRoute r;
  PerturbateurSearch ps = find_perturbateur(action);
  r.homothety = ps.homothety;
  if (ps.homothety) {
    SymplecticSpace V(realize(J, K0));
    for (int attempt = 0; attempt < budget; ++attempt) {
      PMat B = random_rational_lagrangian(V, mix(seed, static_cast<std::uint64_t>(attempt)));
      r.attempts = attempt + 1;
      if (intersection_dim(B, D.apply(B)) != 0) continue;
      if (route) *route = r;
      return verified(D, J, action, S, Filtration{L, to_L(B, L)}, seed, budget, "supersingular construction");
    }
    throw BudgetExhausted("no K-rational Lagrangian with F cap phi(F) = 0 in " + std::to_string(budget) +
                          " samples; retry with a larger budget");
  }
  const int h = *ps.element;
  r.element = h;
  const long m = action.group().element_order(h);
  SymplecticSpace V0(realize(J, K0));
  try {
    r.seed_intersection = lagrangian_h_small_intersection(V0, action(h), m).intersection_dim;
  } catch (const FieldIncompatibility&) {
    long q = m;
    while (q % K0->p() == 0) q /= K0->p();
    if (q == 1)
      r.seed_intersection =
          lagrangian_h_small_intersection(V0, action(h), m, cyclotomic_extension(K0, m)).intersection_dim;
  }
  PMat W = descended_basis(action, S);
  SymplecticSpace VW(descended_gram(W, J, S));
  PMat hL = to_L(action(h), L);
  for (int attempt = 0; attempt < budget; ++attempt) {
    PMat C = random_rational_lagrangian(VW, mix(seed, static_cast<std::uint64_t>(attempt)));
    Filtration F{L, W * to_L(C, L)};
    r.attempts = attempt + 1;
    if (intersection_dim(F.basis, PMat(hL * F.basis)) > 1) continue;
    if (route) *route = r;
    return verified(D, J, action, S, F, seed, budget, "perturbateur construction");
  }
  throw BudgetExhausted("no stable Lagrangian with dim(F cap hF) <= 1 in " + std::to_string(budget) +
                        " samples; retry with a larger budget");
}

std::vector<EAdmSummand> decompose_for_EAdm(const PhiModule& D, const PMat& J, const GroupAction& action) {
  const FieldPtr& K = D.field();
  const FiniteGroup& G = action.group();
  std::map<Rational, PMat> by_slope;
  for (auto& part : isoclinic_decompose(D)) {
    if (part.slope < Rational(0) || part.slope > Rational(1)) throw ValidationError("slope outside [0, 1]");
    by_slope[part.slope] = part.basis;
  }
  std::vector<std::pair<std::vector<Rational>, PMat>> pairs;
  for (const auto& [s, B] : by_slope) {
    if (s > Rational(1, 2)) continue;
    if (s == Rational(1, 2)) {
      pairs.push_back({{s}, B});
      continue;
    }
    auto it = by_slope.find(Rational(1) - s);
    if (it == by_slope.end() || it->second.cols() != B.cols())
      throw ValidationError("slope " + s.str() + " has no matching dual slope");
    pairs.push_back({{s, Rational(1) - s}, hstack(B, it->second)});
  }

  std::optional<CharacterTable> table;
  std::vector<EAdmSummand> out;
  for (const auto& [slopes, B] : pairs) {
    std::vector<PMat> blocks;
    if (G.order() == 1 || action.is_scalar()) {
      blocks.push_back(B);
    } else {
      if (!table) table = CharacterTable::compute(G);
      GroupAction sub = action.restrict(B);
      auto comps = isotypic_decomposition(sub, *table);
      std::vector<bool> used(comps.size(), false);
      for (size_t i = 0; i < comps.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> reach = conjugates_and_duals(*table, comps[i].characters[0], K->p());
        PMat Wb = empty_cols(B.cols(), K);
        for (size_t j = i; j < comps.size(); ++j) {
          if (used[j] || !std::binary_search(reach.begin(), reach.end(), comps[j].characters[0])) continue;
          used[j] = true;
          Wb = hstack(Wb, comps[j].basis);
        }
        blocks.push_back(B * Wb);
      }
    }
    for (const PMat& basis : blocks) {
      if (!D.is_stable(basis)) throw InternalContradiction("summand is not phi-stable");
      EAdmSummand s;
      s.basis = basis;
      s.module = D.restrict(basis);
      s.gram = basis.transpose() * realize(J, K) * basis;
      s.action = action.restrict(basis);
      s.slopes = slopes;
      out.push_back(std::move(s));
    }
  }
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = i + 1; j < out.size(); ++j)
      if (!is_zero(PMat(out[i].basis.transpose() * realize(J, K) * out[j].basis)))
        throw InternalContradiction("summands are not orthogonal");
  return out;
}

// ---------------------------------------------------------------- driver

std::string EAdmVerification::failure() const {
  if (!lagrangian) return "lagrangian";
  if (!contains_torus) return "torus-containment";
  if (!admissible) return "admissibility";
  if (!sub_admissible) return "graded-admissibility-sub";
  if (!quotient_admissible) return "graded-admissibility-quotient";
  if (!stable) return "diagonal-stability";
  if (!cocycle) return "cocycle";
  if (!descent) return "descent-datum";
  return "";
}

GroupAction quotient_action(const SemiAbelianPhiModule& D, const GroupAction& action) {
  const PMat& Q = D.adapted_basis();
  const int n = D.module().dim(), t = D.toric_rank();
  PMat Qi = inverse(Q);
  std::vector<PMat> rep;
  for (int g = 0; g < action.group().order(); ++g) {
    PMat M = Qi * realize(action(g), D.module().field()) * Q;
    if (t > 0 && !is_zero(PMat(M.block(t, 0, n - t, t))))
      throw ValidationError("toric part is not stable under " + action.group().name(g));
    rep.push_back(M.block(t, t, n - t, n - t));
  }
  return GroupAction(action.group(), std::move(rep));
}

EAdmVerification verify_EAdm(const SemiAbelianPhiModule& D, const GroupAction& action, const GaloisSetup& S,
                             const Filtration& F, SubmoduleMode mode, std::uint64_t seed, int budget) {
  EAdmVerification v;
  const FieldPtr& L = S.top();
  const PhiModule& M = D.module();
  const int n = M.dim(), t = D.toric_rank();
  Filtration FL{L, to_L(F.basis, L)};
  PMat TL = to_L(D.toric_basis(), L);
  PMat y = inverse(to_L(D.adapted_basis(), L)) * FL.basis;
  PMat FB = n - t > 0 && FL.dim() > 0 ? column_basis(PMat(y.bottomRows(n - t))) : empty_cols(n - t, L);

  v.contains_torus = t == 0 || (FL.dim() > 0 && contains(FL.basis, TL));
  v.lagrangian = n - t == 0 || is_lagrangian(SymplecticSpace(to_L(D.abelian_part().gram(), L)), FB);
  v.full = check_admissible(M, FL, mode, seed, budget);
  v.admissible = v.full.admissible;
  if (t > 0) {
    PMat X = intersection(FL.basis, TL);
    PMat c = X.cols() ? PMat(left_inverse(TL) * X) : empty_cols(t, L);
    v.sub = check_admissible(M.restrict(D.toric_basis()), Filtration{L, c}, mode, seed, budget);
  }
  v.sub_admissible = v.sub.admissible;
  if (n - t > 0) v.quotient = check_admissible(D.quotient(), Filtration{L, FB}, mode, seed, budget);
  v.quotient_admissible = v.quotient.admissible;
  v.stable = is_diagonally_stable(FL, action, S);
  DescentDatum f = descent_datum(action);
  v.cocycle = check_cocycle(f, action.group());
  v.descent = descent_carries(f, FL, S);
  return v;
}

EAdmResult find_admissible_stable_filtration(const SemiAbelianPhiModule& D, const GroupAction& action,
                                             const GaloisSetup& S, std::uint64_t seed, SubmoduleMode mode,
                                             int budget) {
  if (!same_group(action.group(), S.group())) throw ValidationError("action and Galois setup use different groups");
  const PhiModule& M = D.module();
  action.check_phi_compatible(M);
  const FieldPtr& L = S.top();
  const int n = M.dim(), t = D.toric_rank();
  EAdmResult res;
  PMat FB = empty_cols(n - t, L);
  if (n - t > 0) {
    GroupAction actB = quotient_action(D, action);
    const PMat& JB = D.abelian_part().gram();
    actB.check_symplectic(JB);
    auto pieces = decompose_for_EAdm(D.quotient(), JB, actB);
    for (size_t i = 0; i < pieces.size(); ++i) {
      const EAdmSummand& s = pieces[i];
      const bool ss = s.slopes.size() == 1;
      EAdmPiece info{s.slopes, s.module.dim(), "two-slope"};
      Filtration Fi;
      for (int round = 0;; ++round) {
        const std::uint64_t si = mix(seed, 1000 * i + static_cast<std::uint64_t>(round));
        const int b = budget << round;
        try {
          if (ss) {
            SupersingularRoute r;
            Fi = supersingular_filtration(s.module, s.gram, s.action, S, si, b, &r);
            info.method = r.homothety ? "supersingular-homothety" : "supersingular-perturbateur";
          } else {
            Fi = two_slope_filtration(s.module, s.gram, s.action, S, si, b);
          }
          break;
        } catch (const BudgetExhausted&) {
          if (round == 3) throw;
        }
      }
      FB = hstack(FB, PMat(to_L(s.basis, L) * Fi.basis));
      res.pieces.push_back(std::move(info));
    }
  }
  PMat Q = to_L(D.adapted_basis(), L);
  res.F = Filtration{L, hstack(PMat(Q.leftCols(t)), PMat(Q.rightCols(n - t) * FB))};
  res.datum = descent_datum(action);
  res.verification = verify_EAdm(D, action, S, res.F, mode, seed, budget);
  if (!res.verification.ok())
    throw InternalContradiction("constructed filtration failed verification: " + res.verification.failure());
  return res;
}

}  // namespace isocrys
