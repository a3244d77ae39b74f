from django.apps import AppConfig


class HarnessConfig(AppConfig):
    name = "lgswitch.harness"
