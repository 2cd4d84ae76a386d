// Builds a basis and gauge field from expression strings and prints the
// metric, connection, torsion and both Lagrangians at one point.

#include <cstdio>

#include "qframe/transform.hpp"

using namespace qframe;

int main() {
  const Chart chart;
  const auto field = [&](std::array<std::string, 4> texts) -> FieldFn {
    return BiquatField::parse(texts, chart);
  };

  const BasisField basis{{field({"im*exp(0.3*x)", "0", "0", "0"}),
                          field({"0", "1", "0.5*t", "0"}),
                          field({"0", "0", "1", "0.2*y"}),
                          field({"0", "0.1*z", "0", "1"})}};
  const GaugeConnection omega{{field({"0.2*im*x", "0.3*y", "0.1*im*t", "0.05*z*t"}),
                               field({"0.1*im", "0.2*t", "0.1*z", "0.3*im*x"}),
                               field({"0", "0.1*x*t", "0.2*im", "0.1"}),
                               field({"0.3*im*t", "0.1", "0.2*y", "0.1*im*x*z"})},
                              1.0};
  const Point p{0.3, 0.2, -0.1, 0.4};
  const FDConfig fd;

  const auto frame = frame_at(basis, omega, p, fd);
  std::printf("metric:\n");
  for (int m = 0; m < 4; ++m) {
    std::printf("  %9.5f %9.5f %9.5f %9.5f\n", frame.metric.g(m, 0),
                frame.metric.g(m, 1), frame.metric.g(m, 2), frame.metric.g(m, 3));
  }
  std::printf("|D s|          %.2e\n", minimality_residual(frame));
  std::printf("max torsion    %.4f\n", max_abs(torsion_at(frame.connection)));

  const auto strength = field_strength_from_frame(frame, omega, fd);
  const auto curvature = curvature_from_frame(frame, basis, omega, fd);
  const auto eh = lagrangian_eh(frame, curvature, strength);
  std::printf("L (Ricci)      %.10f\n", eh.via_ricci);
  std::printf("L (Omega)      %.10f\n", eh.via_omega);
  const auto quad = lagrangian_quadratic(frame, strength);
  std::printf("<O,O>          %.10f = %.10f - %.10f\n", quad.total, quad.kk, quad.ff);

  const LorentzField lambda{field({"0", "0.3*t", "0.2*im*x", "0.1"})};
  const CovarianceSetup setup{basis, omega, field({"x", "1", "im*t", "0"}), {}, {},
                              lambda, std::nullopt};
  std::printf("D psi_L covariance residual %.2e\n",
              covariance_residual(CovarianceKind::kLeftSpinor, setup, p, fd));
}
