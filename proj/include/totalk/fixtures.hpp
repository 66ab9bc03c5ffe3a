#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "totalk/lambda.hpp"

namespace totalk {

enum class ConeKind {
  Trivial,                  // only 0
  Nonnegative,              // x >= 0 in Z[1/2] or Q
  ProductPositive,          // every coordinate of a tail product >= 0
  FirstCoordinatePositive,  // first rational coordinate > 0, or x = 0
  Extension,                // projection strictly positive, or inside the included sub-cone
  TotalExtension            // three-condition cone on total K of an extension
};

struct ConeSpec {
  ConeKind kind = ConeKind::Trivial;
  // Extension and TotalExtension:
  std::optional<HomExpr> projection;
  std::shared_ptr<ConeSpec> quotient_cone;
  std::optional<HomExpr> inclusion;
  std::shared_ptr<ConeSpec> sub_cone;
};

const char* cone_name(ConeKind k);

// Finitely supported element of total K: one entry per level.
using TotalElement = std::map<Level, Element>;

bool cone_membership(const ConeSpec& cone, const Element& x);
// Which of the three positivity conditions holds (1, 2, 3), or 0 when none does.
int total_cone_condition(const ConeSpec& cone, const TotalElement& x);
bool cone_membership(const ConeSpec& cone, const TotalElement& x);

struct FixtureBundle {
  std::string name;
  TotalKPtr k;
  std::optional<Element> scale;
  ConeSpec cone;
  std::optional<ConeSpec> total_cone;
  std::vector<std::string> notes;  // e.g. absent levels
  std::map<std::string, GradedHom> graded_maps;
  std::map<std::string, HomExpr> maps;
};

const std::vector<std::string>& fixture_names();
// Throws UnknownFixture. Bundles are cached per bound and share their TotalK.
FixtureBundle load_fixture(const std::string& name, long bound = 24);

// K_0(omega_j; Z_k): K_0(A;Z_k) -> K_0(B;Z_k), k = 0 for integral coefficients.
HomExpr omega_map(long j, bool primed, long k, long bound = 24);
GradedHom omega_graded(long j, bool primed, long bound = 24);
GradedHom phi_graded(bool primed, long bound = 24);

GradedHom gamma_map(long bound = 24);          // K(F_1) -> K(F_2)
GradedHom gamma_inverse_map(long bound = 24);  // K(F_2) -> K(F_1)
GradedHom eta_map(long bound = 24);            // K(E_1) -> K(E_2), the identity
GradedHom iota_map(int i, long bound = 24);    // K(F_i) -> K(E_i)
HomExpr pi_map(int i, long bound = 24);        // K_0(E_i) -> K_0(A_chi)
GradedHom zeta_map(long bound = 24);           // Remark bundles, E_1 -> E_2

// bold Z and bold Q: coordinates j in Z\{0} with tail a_j = l_{|j|!} a.
GroupExpr bold_z();
GroupExpr bold_q();

}  // namespace totalk
