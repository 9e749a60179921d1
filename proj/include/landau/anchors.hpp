#pragma once

// Machine-readable labels attached to every report under "paper_ref".
namespace landau::anchor {

inline constexpr const char* abar_convolution = "§1.1, ā_{i,j} = a_{i,j} ∗_v μ";
inline constexpr const char* eigen_split = "Lemma (N6)(a)";
inline constexpr const char* square_root = "Lemma (N200)(i)";
inline constexpr const char* potential_F = "Eq. (N0)";
inline constexpr const char* F_lower_bound = "lemma following Lemma (N7)";
inline constexpr const char* coercivity = "Lemma (N200)(iii)/(N501); Lemma (N7)";
inline constexpr const char* symbols_def = "Eq. (N20)";
inline constexpr const char* lambda_K = "(N52)";
inline constexpr const char* cutoff_psi = "(N21)";
inline constexpr const char* multiplier_g = "Eq. (N36); Lemma (P5)";
inline constexpr const char* m_average = "Lemma (P1)";
inline constexpr const char* admissible = "(M61)";
inline constexpr const char* symbol_class = "Lemma (N26); Lemma (N25); Lemma (P5)";
inline constexpr const char* derivative_bounds = "Lemma (N27); Lemma (M80); Lemma (N28); (N38)";
inline constexpr const char* weyl = "Eq. (M27)";
inline constexpr const char* wick = "(P3); (P7)";
inline constexpr const char* choose_K = "proof of Theorem (M36)(I); (M71)";
inline constexpr const char* basic_theorem = "Theorem (M36)";
inline constexpr const char* m164 = "Lemma (M164)";
inline constexpr const char* a_xi = "Eq. (N9)";
inline constexpr const char* k_part = "§1.1 compact part ℒ₂; Eq. (N14)";
inline constexpr const char* p_xi = "Eq. (N4); Eq. (N14)";
inline constexpr const char* majorant = "Eq. (N52); (M36)(V)/(VI)";
inline constexpr const char* dissipation = "(N502); proof of Theorem (N15)";
inline constexpr const char* collision_invariant = "§1.1, Q(μ,μ)=0";
inline constexpr const char* spectrum = "Theorem (N5)(a)";
inline constexpr const char* enclosure = "(N112)";
inline constexpr const char* resolvent = "(N113)";
inline constexpr const char* left_half_plane = "(W3)";
inline constexpr const char* hypo_w4 = "Theorem (N102)/(W4)";
inline constexpr const char* hypo_m142 = "(M142)";
inline constexpr const char* hypo_n111 = "(N111)";
inline constexpr const char* semigroup = "Corollary (N3000)";
inline constexpr const char* artifact = "invented — artifact plumbing";

}  // namespace landau::anchor
