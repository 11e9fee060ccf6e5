#include "core/report.hpp"

#include <cmath>
#include <iomanip>

namespace core {

void ExperimentReport::write_csv(std::ostream& out, bool header) const {
  if (header) out << "code,n,k,t,stretch,p,metric,mean,variance,samples,seed\n";
  for (const ExperimentRow& r : rows) {
    const double stretch = r.k ? static_cast<double>(r.n) / r.k : 0.0;
    out << r.code << ',' << r.n << ',' << r.k << ',' << r.t << ','
        << std::setprecision(6) << stretch << ',' << r.p << ',' << r.metric
        << ',' << std::setprecision(12);
    if (std::isinf(r.mean))
      out << "inf";
    else
      out << r.mean;
    out << ',' << r.variance << ',' << r.samples << ',' << seed << '\n';
  }
}

}  // namespace core
