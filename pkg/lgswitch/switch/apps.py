from django.apps import AppConfig


class SwitchAppConfig(AppConfig):
    name = "lgswitch.switch"
