#include "echomark/roc.hpp"

#include "echomark/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace echomark {

RocResult roc(std::span<const double> true_scores, std::span<const double> false_scores)
{
    if (true_scores.empty() || false_scores.empty())
        throw Error("ROC needs non-empty true and false score sets");
    std::vector<std::pair<double, bool>> all;
    all.reserve(true_scores.size() + false_scores.size());
    for (double s : true_scores) {
        if (std::isnan(s))
            throw Error("ROC scores must not be NaN");
        all.emplace_back(s, true);
    }
    for (double s : false_scores) {
        if (std::isnan(s))
            throw Error("ROC scores must not be NaN");
        all.emplace_back(s, false);
    }
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocResult r;
    r.n_true = true_scores.size();
    r.n_false = false_scores.size();
    const double nt = static_cast<double>(r.n_true);
    const double nf = static_cast<double>(r.n_false);

    r.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < all.size();) {
        const double threshold = all[i].first;
        for (; i < all.size() && all[i].first == threshold; ++i)
            (all[i].second ? tp : fp) += 1;
        r.points.push_back({static_cast<double>(fp) / nf, static_cast<double>(tp) / nt});
    }
    r.auroc = trapezoid_area(r.points);
    return r;
}

double trapezoid_area(std::span<const RocPoint> points)
{
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
    return area;
}

} // namespace echomark
