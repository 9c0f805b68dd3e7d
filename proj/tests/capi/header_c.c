/* The public header must compile as C. */
#include <harnacklab/harnacklab.h>

int main(void) {
  hl_model *m = NULL;
  hl_status s = hl_model_brownian(3, &m);
  int ok = s == HL_OK && hl_model_dim(m) == 3;
  hl_model_free(m);
  return ok ? 0 : 1;
}
