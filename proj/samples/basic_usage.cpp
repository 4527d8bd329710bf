// Two planes in R^4 meeting at a common angle, their principal values, and
// a pair rebuilt from those values.

#include <cmath>
#include <cstdio>
#include <numbers>

#include <subangle/subangle.hpp>

int main() {
  using namespace subangle;

  const double phi = std::numbers::pi / 3;
  const double c = std::cos(phi), s = std::sin(phi);
  const Subspace sigma1 = make_subspace(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}});
  const Subspace sigma2 = make_subspace(Matrix{{c, 0, s, 0}, {0, c, 0, s}});

  const AngleResult angle = angle_between(sigma1, sigma2);
  std::printf("cos phi = %.6f (phi = %.6f rad)\n", angle.cos_phi, angle.phi);

  const PrincipalSpectrum spectrum = principal_spectrum(sigma1, sigma2);
  for (std::size_t i = 0; i < spectrum.values.size(); ++i)
    std::printf("principal value %.6f, multiplicity %zu\n", spectrum.values[i], spectrum.multiplicities[i]);

  const CanonicalForm form = canonical_bases(sigma1, sigma2);
  std::printf("canonical matrix:\n");
  for (std::size_t i = 0; i < form.matrix.rows(); ++i) {
    for (std::size_t j = 0; j < form.matrix.cols(); ++j) std::printf(" % .4f", form.matrix(i, j));
    std::printf("\n");
  }

  const SynthesizedPair rebuilt = synthesize_pair(4, 2, 2, spectrum.expanded());
  std::printf("rebuilt pair: cos phi = %.6f\n", angle_between(rebuilt.first, rebuilt.second).cos_phi);

  const Vector x{1, 2, 3, 4};
  const Vector px = project_gram(x, sigma2);
  std::printf("projection of (1,2,3,4) onto sigma2: %.4f %.4f %.4f %.4f\n", px[0], px[1], px[2], px[3]);
  return 0;
}
