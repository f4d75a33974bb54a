#include "scusum/scusum.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

int main(void) {
  double b = 0.0;
  EXPECT(strcmp(scusum_version(), "0.1.0") == 0);
  EXPECT(scusum_beta(exp(1.0), &b) == SCUSUM_OK);
  EXPECT(fabs(b - 1.718281828459045) < 1e-12);
  EXPECT(scusum_beta(1.0, &b) == SCUSUM_ERROR_INPUT);
  EXPECT(strstr(scusum_last_error(), "rho") != NULL);
  EXPECT(scusum_beta(1.2, NULL) == SCUSUM_ERROR_INPUT);

  scusum_detector_config config;
  scusum_detector_config_init(&config);
  config.rho = 1.5;
  config.threshold = 4.0;
  scusum_detector* det = NULL;
  EXPECT(scusum_detector_create(&config, &det) == SCUSUM_OK);
  int alarm = -1;
  EXPECT(scusum_detector_step(det, 3, 2.0, &alarm) == SCUSUM_OK);
  EXPECT(alarm == 0);
  double v = 0.0;
  int64_t seen = 0;
  EXPECT(scusum_detector_state(det, &v, NULL, &seen) == SCUSUM_OK);
  EXPECT(seen == 3);
  EXPECT(scusum_beta(1.5, &b) == SCUSUM_OK);
  EXPECT(fabs(v - (3.0 - 2.0 * b)) < 1e-8);
  EXPECT(scusum_detector_step(det, 9, 2.0, &alarm) == SCUSUM_OK);
  EXPECT(alarm == 1);
  EXPECT(scusum_detector_step(det, -1, 2.0, &alarm) == SCUSUM_ERROR_INPUT);
  scusum_detector_free(det);

  config.rho = 1.0;
  det = NULL;
  EXPECT(scusum_detector_create(&config, &det) == SCUSUM_ERROR_INPUT);
  EXPECT(det == NULL);

  scusum_model* model = NULL;
  EXPECT(scusum_model_load("/nonexistent/model.json", &model) == SCUSUM_ERROR_INPUT);
  EXPECT(model == NULL);

  scusum_fit_options fit;
  scusum_fit_options_init(&fit);
  EXPECT(scusum_run_fit(&fit) == SCUSUM_ERROR_INPUT);
  EXPECT(strstr(scusum_last_error(), "daily") != NULL);

  scusum_detector_options opts;
  scusum_detector_options_init(&opts);
  EXPECT(opts.rho == 1.2);
  EXPECT(opts.reset_on_alarm == 1);
  EXPECT(opts.replications == 1000);

  if (failures == 0) {
    printf("c api smoke test passed\n");
  }
  return failures == 0 ? 0 : 1;
}
