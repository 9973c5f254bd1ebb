# Generated by Django 5.1.3 on 2026-10-18 09:00

import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=50)),
                ('config_name', models.CharField(max_length=200)),
                ('config_text', models.TextField(blank=True)),
                ('seed', models.BigIntegerField()),
                ('samples', models.IntegerField()),
                ('include_double_clicks', models.BooleanField(default=True)),
                ('status', models.CharField(choices=[('RUNNING', 'Running'), ('SUCCEEDED', 'Succeeded'), ('FAILED', 'Failed')], default='RUNNING', max_length=20)),
                ('row_count', models.IntegerField(blank=True, null=True)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('message', models.TextField(blank=True)),
                ('started_at', models.DateTimeField(default=django.utils.timezone.now)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
    ]
