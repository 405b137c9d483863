import hypothesis

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=60
)
hypothesis.settings.register_profile(
    "fast", deadline=None, max_examples=10
)
hypothesis.settings.load_profile("default")
