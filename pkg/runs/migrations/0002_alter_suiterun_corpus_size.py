# Generated by Django 5.2 on 2026-10-18 08:41

import django.core.validators
from django.db import migrations, models


class Migration(migrations.Migration):

    dependencies = [
        ('runs', '0001_initial'),
    ]

    operations = [
        migrations.AlterField(
            model_name='suiterun',
            name='corpus_size',
            field=models.PositiveIntegerField(blank=True, help_text="Empty runs the suite's own corpus size.", null=True, validators=[django.core.validators.MinValueValidator(1)]),
        ),
    ]
