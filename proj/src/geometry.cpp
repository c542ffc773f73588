#include "plotdig/geometry.hpp"

namespace plotdig {

double iou(const BoundingBox& a, const BoundingBox& b)
{
    const BoundingBox inter = intersect(a, b);
    if (inter.x_min >= inter.x_max || inter.y_min >= inter.y_max) {
        return 0.0;
    }
    const double inter_area = double(inter.area());
    const double union_area = double(a.area()) + double(b.area()) - inter_area;
    return inter_area / union_area;
}

}  // namespace plotdig
