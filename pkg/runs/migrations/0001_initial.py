# Generated by Django 5.2 on 2026-10-18 09:12

import django.core.validators
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SuiteRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('suite', models.CharField(choices=[('bounded_swap', 'bounded_swap'), ('downward_closure', 'downward_closure'), ('empty_team', 'empty_team'), ('flat_conservativity', 'flat_conservativity'), ('hat_agreement', 'hat_agreement'), ('lift_B', 'lift_B'), ('lift_E', 'lift_E'), ('locality_df', 'locality_df'), ('logicality', 'logicality'), ('monotone_bounded_agreement', 'monotone_bounded_agreement'), ('nonlocality_witness', 'nonlocality_witness'), ('rewrite_soundness', 'rewrite_soundness'), ('singleton_agreement', 'singleton_agreement'), ('strict_lax', 'strict_lax'), ('swap_entailments', 'swap_entailments'), ('union_closed_locality', 'union_closed_locality')], max_length=64)),
                ('size', models.PositiveSmallIntegerField(default=3, validators=[django.core.validators.MinValueValidator(1), django.core.validators.MaxValueValidator(4)])),
                ('extra', models.PositiveSmallIntegerField(default=1, validators=[django.core.validators.MaxValueValidator(2)])),
                ('seed', models.IntegerField(default=0)),
                ('corpus_size', models.PositiveIntegerField(default=50, validators=[django.core.validators.MinValueValidator(1)])),
                ('status', models.CharField(choices=[('pending', 'Pending'), ('running', 'Running'), ('holds', 'Holds'), ('fails', 'Fails'), ('error', 'Error')], default='pending', max_length=8)),
                ('cases', models.PositiveIntegerField(default=0)),
                ('report', models.TextField(blank=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
