#pragma once

#include "sparsevar/cross_validation.hpp"
#include "sparsevar/csv.hpp"
#include "sparsevar/dates.hpp"
#include "sparsevar/descriptive.hpp"
#include "sparsevar/error.hpp"
#include "sparsevar/evaluation.hpp"
#include "sparsevar/forecasting.hpp"
#include "sparsevar/granger.hpp"
#include "sparsevar/ingestion.hpp"
#include "sparsevar/lasso.hpp"
#include "sparsevar/linalg.hpp"
#include "sparsevar/model_io.hpp"
#include "sparsevar/panel.hpp"
#include "sparsevar/parallel.hpp"
#include "sparsevar/random.hpp"
#include "sparsevar/synthetic.hpp"
#include "sparsevar/var_model.hpp"
