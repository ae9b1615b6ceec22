#pragma once

#include "subriem/algebra.hpp"

#include <vector>

namespace subriem {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    Vec nodes;
    Vec weights;
};
GaussLegendre gauss_legendre(int q);

// Axis-aligned parameter box.
struct ParameterBox {
    Vec lower;
    Vec upper;

    int dim() const { return static_cast<int>(lower.size()); }
    double volume() const;
};

// Nodes (one per column) and positive weights on a parameter box.
struct QuadratureGrid {
    ParameterBox box;
    int order = 0;  // Gauss-Legendre order per axis, 0 for plain node grids
    Mat nodes;
    Vec weights;

    int size() const { return static_cast<int>(nodes.cols()); }

    // Tensor-product Gauss-Legendre rule of order q per axis.
    static QuadratureGrid gauss(const ParameterBox& box, int q);
    // Evenly spaced nodes including the box corners; weights are equal and sum to the volume.
    static QuadratureGrid uniform(const ParameterBox& box, const std::vector<int>& counts);
};

// One face of a parameter box with a rule in the remaining coordinates.
struct BoxFace {
    int axis = 0;
    double outward = 1.0;  // +1 on the upper face, -1 on the lower one
    QuadratureGrid grid;   // nodes in full box coordinates; weights integrate over the face
};

std::vector<BoxFace> box_faces(const ParameterBox& box, int q);

}  // namespace subriem
