#include "jetflow/metric.hpp"

#include <algorithm>
#include <sstream>

namespace jetflow {

MetricSpec MetricSpec::make(std::vector<std::string> coords,
                            MatT<Expr> components,
                            std::vector<int> signature) {
    const std::size_t d = coords.size();
    if (d == 0) throw GeometryError("metric dimension must be positive");
    if (components.rows() != d || components.cols() != d)
        throw GeometryError("metric component grid shape does not match dimension");
    if (signature.size() != d)
        throw GeometryError("signature length does not match dimension");
    for (int s : signature)
        if (s != 1 && s != -1) throw GeometryError("signature entries must be +1 or -1");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            if (!components(i, j).same_tree(components(j, i))) {
                std::ostringstream os;
                os << "metric grid is not symmetric at (" << i + 1 << "," << j + 1 << ")";
                throw GeometryError(os.str());
            }
            components(j, i) = components(i, j); // share one tree
        }
    MetricSpec m;
    m.dim = d;
    m.coords = std::move(coords);
    m.comps = std::move(components);
    m.signature = std::move(signature);
    return m;
}

void verify_signature(const MetricSpec& m, const EvalPoint& p) {
    Mat g = metric_at(m, p);
    auto [pos, neg] = symmetric_eigen_signs(g);
    int want_pos = 0, want_neg = 0;
    for (int s : m.signature) (s > 0 ? want_pos : want_neg)++;
    if (pos != want_pos || neg != want_neg) {
        std::ostringstream os;
        os << "metric signature mismatch: declared (" << want_pos << "+, " << want_neg
           << "-) but eigenvalues give (" << pos << "+, " << neg << "-)";
        throw GeometryError(os.str());
    }
}

static NdArray contract_slot(const Mat& metric, const NdArray& v, std::size_t slot) {
    if (slot >= v.rank()) throw GeometryError("index slot out of range");
    const std::size_t d = v.shape()[slot];
    if (d != metric.rows()) throw GeometryError("slot extent does not match metric dimension");
    NdArray out(v.shape());
    const std::size_t stride = v.stride(slot);
    const std::size_t total = v.size();
    for (std::size_t base = 0; base < total; ++base) {
        // only positions whose slot index is 0 act as anchors
        if ((base / stride) % d != 0) continue;
        for (std::size_t a = 0; a < d; ++a) {
            double sum = 0.0;
            for (std::size_t b = 0; b < d; ++b)
                sum += metric(a, b) * v.flat()[base + b * stride];
            out.flat()[base + a * stride] = sum;
        }
    }
    return out;
}

NdArray raise_index(const MetricSpec& m, const EvalPoint& p, const NdArray& v, std::size_t slot) {
    return contract_slot(inverse_metric_at(m, p), v, slot);
}

NdArray lower_index(const MetricSpec& m, const EvalPoint& p, const NdArray& v, std::size_t slot) {
    return contract_slot(metric_at(m, p), v, slot);
}

} // namespace jetflow
