# discbound test suite
