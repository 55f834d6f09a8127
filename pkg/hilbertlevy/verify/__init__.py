"""Statistical checks of sampled processes against their analytic properties."""
