# magnus package
