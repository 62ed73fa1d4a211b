#include "recaudit/errors.hpp"
#include "recaudit/models.hpp"

namespace recaudit {

MostPopModel train_mostpop(const InteractionMatrix& m) {
  if (m.n_users() == 0 || m.n_items() == 0)
    throw TrainError("mostpop: interaction matrix is empty");
  MostPopModel model;
  model.scores.resize(m.n_items());
  for (uint32_t i = 0; i < m.n_items(); ++i)
    model.scores[i] = static_cast<double>(m.item_users(i).size());
  return model;
}

}  // namespace recaudit
