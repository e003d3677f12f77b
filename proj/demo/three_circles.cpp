// Finds every critical connecting cycle of three concentric circles and lines
// the numbers up against the closed-form values.
//
//   three_circles            radii 1 2 3
//   three_circles 0.7 2 5.5

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "ccycles/ccycles.hpp"

int main(int argc, char** argv) {
  std::vector<double> r{1.0, 2.0, 3.0};
  if (argc == 4) {
    for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(i)] = std::strtod(argv[i + 1], nullptr);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [r1 r2 r3]\n", argv[0]);
    return 2;
  }

  try {
    const ccycles::Radii radii(r);
    const auto cat = ccycles::find_all(radii);
    std::printf("radii %g %g %g: %zu critical points, euler sum %d\n\n", r[0], r[1], r[2], cat.points.size(),
                cat.euler_sum);
    std::printf("%-3s %-18s %-6s %-14s %s\n", "#", "shape", "index", "perimeter", "angles");
    for (std::size_t i = 0; i < cat.points.size(); ++i) {
      const auto& p = cat.points[i];
      const auto a = p.config.angles();
      std::printf("%-3zu %-18s %-6d %-14.10f %.6f %.6f\n", i, std::string(ccycles::to_string(p.shape)).c_str(),
                  p.morse_index, p.perimeter, a[0], a[1]);
    }

    if (!radii.generic()) {
      std::printf("\nradii are not pairwise distinct; parades are singular, no closed-form table\n");
      return 0;
    }
    std::printf("\nclosed form\n");
    std::size_t k = 0;
    double worst = 0.0;
    for (const auto& v : ccycles::three_cc_catalogue(r[0], r[1], r[2])) {
      for (int m = 0; m < v.multiplicity && k < cat.points.size(); ++m, ++k) {
        const double diff = std::abs(cat.points[k].perimeter - v.value);
        if (diff > worst) worst = diff;
      }
      std::printf("  %-16s %.10f  x%d  index %d\n", v.kind.c_str(), v.value, v.multiplicity, v.index);
    }
    std::printf("\nlargest deviation %.2e\n", worst);
    std::printf("maximal triangle inradius %.10f\n", ccycles::fermat_triangle_inradius(r[0], r[1], r[2]));
  } catch (const ccycles::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
