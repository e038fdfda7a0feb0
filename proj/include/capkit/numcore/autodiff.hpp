#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "capkit/numcore/tensor.hpp"

namespace capkit::numcore {

// Reverse-mode tape node. Parameters are long-lived nodes reused across
// forward passes; op nodes are created per pass and freed with the graph.
// Gradients accumulate additively; call zero_grads before a new step.
struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    std::string name;  // parameters only
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;

    void ensure_grad() {
        if (!grad.same_shape(value)) grad = Tensor(value.shape());
    }
};

using NodePtr = std::shared_ptr<Node>;
using ParamList = std::vector<NodePtr>;

NodePtr constant(Tensor v);
NodePtr make_parameter(std::string name, Tensor v);

NodePtr matmul(const NodePtr& a, const NodePtr& b);
NodePtr add(const NodePtr& a, const NodePtr& b);          // same shape
NodePtr add_rowvec(const NodePtr& a, const NodePtr& b);   // (n,m) + (1,m)
NodePtr mul(const NodePtr& a, const NodePtr& b);          // elementwise
NodePtr concat(const NodePtr& a, const NodePtr& b, int axis);
NodePtr sigmoid(const NodePtr& a);
NodePtr tanh_op(const NodePtr& a);
NodePtr softmax_rows(const NodePtr& a);
NodePtr embedding_lookup(const NodePtr& table, const std::vector<int>& ids);
NodePtr mean_rows(const NodePtr& a);  // (n,m) -> (1,m)
NodePtr scale(const NodePtr& a, double factor);

// Mean negative log-likelihood of targets under row-wise softmax(logits).
// mask weights rows (empty = all ones); masked-out rows contribute nothing.
NodePtr cross_entropy(const NodePtr& logits, const std::vector<int>& targets,
                      const std::vector<double>& mask = {});

// Seeds d(loss)/d(loss)=1 and propagates to every reachable node with
// requires_grad. loss must be scalar and must come from a recorded forward
// computation (BackwardWithoutForward otherwise).
void backward(const NodePtr& loss);

}  // namespace capkit::numcore
